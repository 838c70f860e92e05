//! `gwvn`: command-line experiments for basis-entropy typicality.
//!
//! Exit codes: 0 success, 1 a numeric assertion failed (outputs are still
//! written), 2 invalid flags, inputs or output paths.

mod commands;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use thiserror::Error;

use output::{Format, RunManifest, Sink};

#[derive(Debug, Parser)]
#[command(name = "gwvn", version, about = "Basis entropy of Haar-random states and its typicality")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Format of tabular outputs; summaries are always JSON.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    threads: Option<u64>,

    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    /// Refuse runs whose estimated peak memory exceeds this many MiB.
    #[arg(long = "mem-cap-mib", global = true, default_value_t = 4096)]
    mem_cap_mib: u64,

    /// Record wall-clock duration in the manifest (breaks byte identity).
    #[arg(long, global = true)]
    record_timing: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Computational-basis entropies of Haar-random states.
    SampleEntropy {
        #[arg(short = 'N', long, value_parser = clap::value_parser!(u64).range(1..))]
        dim: u64,
        #[arg(short = 'M', long, value_parser = clap::value_parser!(u64).range(1..))]
        samples: u64,
    },
    /// Closed-form mean and variance for a list of dimensions.
    Moments {
        #[arg(long, value_delimiter = ',', required = true,
              value_parser = clap::value_parser!(u64).range(1..))]
        dims: Vec<u64>,
    },
    /// Empirical distribution of S/ln N against the logistic model.
    FitDist {
        #[arg(short = 'N', long, default_value_t = 510, value_parser = clap::value_parser!(u64).range(2..))]
        dim: u64,
        #[arg(short = 'M', long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
        samples: u64,
    },
    /// Subsystem, environment and total entropies of bipartite states.
    Subsystem {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        m: u64,
        #[arg(short = 'M', long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
        samples: u64,
    },
    /// Entropy relaxation under GOE Hamiltonians.
    Dynamics {
        #[arg(short = 'N', long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(2..))]
        dim: u64,
        #[arg(long, default_value_t = 20.0)]
        tmax: f64,
        #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(2..))]
        steps: u64,
        /// Number of GOE Hamiltonians averaged.
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
        seeds: u64,
        /// Equally spaced spectrum instead of GOE; reported, not asserted.
        #[arg(long)]
        integrable: bool,
    },
    /// Gibbs weights at a target mean energy.
    Maxent {
        /// CSV of energy levels (any layout; a non-numeric first row is a header).
        #[arg(long)]
        levels: PathBuf,
        #[arg(long)]
        energy: f64,
        /// Step of the central difference dS/dE.
        #[arg(long, default_value_t = 1e-4)]
        de: f64,
        #[arg(long, default_value_t = 100)]
        trials: u64,
    },
    /// Empirical deviation tails against the concentration bound.
    Levy {
        #[arg(short = 'N', long, default_value_t = 110, value_parser = clap::value_parser!(u64).range(2..))]
        dim: u64,
        #[arg(short = 'M', long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
        samples: u64,
    },
    /// Runs the acceptance criteria and writes their checks.
    ReproduceAll {
        /// Subset of criteria, e.g. `A3,A8`.
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] gwvn_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    fn csv(path: &Path, source: csv::Error) -> Self {
        CliError::Csv {
            path: path.to_path_buf(),
            source,
        }
    }
}

/// What a command reports back: its manifest parameters and any failed
/// numeric assertions.
pub struct Report {
    pub parameters: serde_json::Value,
    pub failures: Vec<String>,
}

/// Shared run settings.
pub struct Ctx {
    pub seed: u64,
    pub threads: usize,
    pub mem_cap_bytes: u64,
}

impl Ctx {
    pub fn check_memory(&self, estimate_bytes: u64) -> Result<(), CliError> {
        if estimate_bytes > self.mem_cap_bytes {
            return Err(CliError::Usage(format!(
                "estimated memory {:.1} MiB exceeds the cap of {:.1} MiB (raise --mem-cap-mib)",
                estimate_bytes as f64 / 1048576.0,
                self.mem_cap_bytes as f64 / 1048576.0
            )));
        }
        Ok(())
    }
}

fn run(cli: Cli) -> Result<Vec<String>, CliError> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t as usize)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let ctx = Ctx {
        seed: cli.seed,
        threads: rayon::current_num_threads(),
        mem_cap_bytes: cli.mem_cap_mib.saturating_mul(1 << 20),
    };
    let started = Instant::now();
    let mut sink = Sink::new(&cli.out, cli.format)?;
    let (name, report) = match cli.command {
        Command::SampleEntropy { dim, samples } => {
            ("sample-entropy", commands::sample_entropy(&ctx, &mut sink, dim, samples)?)
        }
        Command::Moments { dims } => ("moments", commands::moments(&mut sink, &dims)?),
        Command::FitDist { dim, samples } => ("fit-dist", commands::fit_dist(&ctx, &mut sink, dim, samples)?),
        Command::Subsystem { n, m, samples } => {
            ("subsystem", commands::subsystem(&ctx, &mut sink, n, m, samples)?)
        }
        Command::Dynamics {
            dim,
            tmax,
            steps,
            seeds,
            integrable,
        } => (
            "dynamics",
            commands::dynamics(&ctx, &mut sink, dim, tmax, steps, seeds, integrable)?,
        ),
        Command::Maxent {
            levels,
            energy,
            de,
            trials,
        } => ("maxent", commands::maxent(&ctx, &mut sink, &levels, energy, de, trials)?),
        Command::Levy { dim, samples } => ("levy", commands::levy(&ctx, &mut sink, dim, samples)?),
        Command::ReproduceAll { only } => ("reproduce-all", commands::reproduce_all(&ctx, &mut sink, &only)?),
    };
    let mut manifest = RunManifest::new(name, ctx.seed, report.parameters);
    if cli.record_timing {
        manifest.duration_secs = Some(started.elapsed().as_secs_f64());
    }
    sink.manifest(manifest)?;
    Ok(report.failures)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(failures) if failures.is_empty() => ExitCode::SUCCESS,
        Ok(failures) => {
            for f in failures {
                eprintln!("assertion failed: {f}");
            }
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
