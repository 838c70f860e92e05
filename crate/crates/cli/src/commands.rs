use std::mem::size_of;
use std::path::Path;

use serde_json::json;

use gwvn_core::acceptance::{self, Outcome};
use gwvn_core::analytic::{
    additivity_defect, mean_entropy, page_mean_approx, page_mean_exact, subsystem_mean,
    subsystem_variance, variance_entropy, EntropyStats,
};
use gwvn_core::bipartite::{entropy_triple, reduce, von_neumann_entropy};
use gwvn_core::distfit::{chi_square, fd_params, ks_distance};
use gwvn_core::dynamics::{
    goe_ensemble_trace, relaxation_trace, time_grid, CompletedBasis, Hamiltonian,
};
use gwvn_core::levy::{
    default_delta_grid, empirical_tail, lipschitz_sq, lipschitz_sq_sup, max_variance_bound,
    sup_bound_applies,
};
use gwvn_core::maxent::{first_law_check, gibbs_probs, solve_beta, verify_stationarity};
use gwvn_core::montecarlo::{bipartite_samples, entropy_samples, par_indexed};
use gwvn_core::sampler::haar_state_at;
use gwvn_core::{
    EmpiricalCdf, EntropySample, EntropyTriple, SampleConfig, Side, Spectrum, StateVector, Summary,
};

use crate::output::{Cell, Sink};
use crate::{CliError, Ctx, Report};

const COMPLEX_BYTES: u64 = 16;

fn usize_of(x: u64) -> Result<usize, CliError> {
    usize::try_from(x).map_err(|_| CliError::Usage(format!("{x} does not fit in usize")))
}

/// Per-sample records kept for the run plus one working state per thread.
fn stream_estimate(ctx: &Ctx, samples: u64, record: usize, state_dim: u64) -> u64 {
    samples * record as u64 + ctx.threads as u64 * state_dim * COMPLEX_BYTES * 2
}

pub fn sample_entropy(ctx: &Ctx, sink: &mut Sink, dim: u64, samples: u64) -> Result<Report, CliError> {
    ctx.check_memory(stream_estimate(ctx, samples, size_of::<EntropySample>(), dim))?;
    let cfg = SampleConfig::new(usize_of(dim)?, usize_of(samples)?, ctx.seed)?;
    let draws = entropy_samples(&cfg);
    let stats = EntropyStats::of(dim)?;
    let raw = Summary::of(&draws.iter().map(|s| s.value).collect::<Vec<_>>());
    let normalized = Summary::of(&draws.iter().map(|s| s.normalized).collect::<Vec<_>>());
    sink.table(
        "sample-entropy",
        &["index", "entropy", "normalized", "mean_analytic"],
        draws
            .iter()
            .map(|s| vec![s.index.into(), s.value.into(), s.normalized.into(), stats.mean.into()]),
    )?;
    sink.summary(
        "sample-entropy",
        &json!({
            "dim": dim,
            "samples": samples,
            "seed": ctx.seed,
            "entropy": raw,
            "normalized": normalized,
            "mean_analytic": stats.mean,
            "variance_analytic": stats.variance,
            "mean_over_ln_dim_analytic": stats.mean_over_ln_dim(),
        }),
    )?;
    Ok(Report {
        parameters: json!({ "dim": dim, "samples": samples }),
        failures: Vec::new(),
    })
}

pub fn moments(sink: &mut Sink, dims: &[u64]) -> Result<Report, CliError> {
    let rows = dims
        .iter()
        .map(|&n| EntropyStats::of(n).map(|s| vec![n.into(), s.mean.into(), s.variance.into(), s.mean_over_ln_dim().into()]))
        .collect::<Result<Vec<_>, _>>()?;
    sink.table("moments", &["N", "mean", "variance", "mean_over_ln_N"], rows)?;
    Ok(Report {
        parameters: json!({ "dims": dims }),
        failures: Vec::new(),
    })
}

pub fn fit_dist(ctx: &Ctx, sink: &mut Sink, dim: u64, samples: u64) -> Result<Report, CliError> {
    ctx.check_memory(stream_estimate(ctx, samples, size_of::<EntropySample>() + 8, dim))?;
    let cfg = SampleConfig::new(usize_of(dim)?, usize_of(samples)?, ctx.seed)?;
    let values: Vec<f64> = entropy_samples(&cfg).into_iter().map(|s| s.value).collect();
    let params = fd_params(dim)?;
    let ecdf = EmpiricalCdf::from_entropies(&values, dim)?;
    let ks = ks_distance(&ecdf, &params)?;
    let chi = chi_square(&ecdf, &params)?;
    let m = ecdf.len() as f64;
    sink.table(
        "fit-dist",
        &["s", "empirical_cdf", "model_cdf", "model_pdf"],
        ecdf.values().iter().enumerate().map(|(i, &s)| {
            vec![s.into(), ((i + 1) as f64 / m).into(), params.cdf(s).into(), params.pdf(s).into()]
        }),
    )?;
    sink.summary(
        "fit-dist",
        &json!({
            "dim": dim,
            "samples": samples,
            "mu": params.mu,
            "c": params.c,
            "midpoint": params.midpoint(),
            "ks_distance": ks,
            "chi_square": chi,
            "entropy": Summary::of(&values),
            "normalized": Summary::of(ecdf.values()),
        }),
    )?;
    Ok(Report {
        parameters: json!({ "dim": dim, "samples": samples }),
        failures: Vec::new(),
    })
}

pub fn subsystem(ctx: &Ctx, sink: &mut Sink, n: u64, m: u64, samples: u64) -> Result<Report, CliError> {
    ctx.check_memory(stream_estimate(ctx, samples, size_of::<(EntropyTriple, f64)>(), n * m + n * n + m * m))?;
    let (nu, mu, count) = (usize_of(n)?, usize_of(m)?, usize_of(samples)?);
    let draws = bipartite_samples(nu, mu, count, ctx.seed, |s| {
        let vn = von_neumann_entropy(&reduce(s, Side::System));
        (entropy_triple(s), vn)
    });
    let draws = draws
        .into_iter()
        .map(|(t, vn)| vn.map(|v| (t, v)))
        .collect::<Result<Vec<_>, _>>()?;
    let system_mean = subsystem_mean(n, m)?;
    let defect = additivity_defect(n, m)?;
    sink.table(
        "subsystem",
        &["index", "system", "environment", "total", "defect", "von_neumann_system", "system_mean_analytic", "defect_analytic"],
        draws.iter().enumerate().map(|(i, (t, vn))| {
            vec![
                i.into(),
                t.system.into(),
                t.environment.into(),
                t.total.into(),
                t.defect().into(),
                (*vn).into(),
                system_mean.into(),
                defect.into(),
            ]
        }),
    )?;
    let col = |f: &dyn Fn(&(EntropyTriple, f64)) -> f64| Summary::of(&draws.iter().map(f).collect::<Vec<_>>());
    sink.summary(
        "subsystem",
        &json!({
            "n": n,
            "m": m,
            "samples": samples,
            "system": col(&|d| d.0.system),
            "environment": col(&|d| d.0.environment),
            "total": col(&|d| d.0.total),
            "defect": col(&|d| d.0.defect()),
            "von_neumann_system": col(&|d| d.1),
            "system_mean_analytic": system_mean,
            "system_variance_analytic": subsystem_variance(n, m)?,
            "environment_mean_analytic": subsystem_mean(m, n)?,
            "environment_variance_analytic": subsystem_variance(m, n)?,
            "total_mean_analytic": mean_entropy(n * m)?,
            "defect_analytic": defect,
            "page_mean_exact": page_mean_exact(n, m)?,
            "page_mean_approx": page_mean_approx(n.min(m), n.max(m))?,
        }),
    )?;
    Ok(Report {
        parameters: json!({ "n": n, "m": m, "samples": samples }),
        failures: Vec::new(),
    })
}

#[allow(clippy::too_many_arguments)]
pub fn dynamics(
    ctx: &Ctx,
    sink: &mut Sink,
    dim: u64,
    tmax: f64,
    steps: u64,
    seeds: u64,
    integrable: bool,
) -> Result<Report, CliError> {
    if !(tmax > 0.0 && tmax.is_finite()) {
        return Err(CliError::Usage(format!("--tmax must be positive, got {tmax}")));
    }
    let per_h = dim * dim * COMPLEX_BYTES * 4;
    ctx.check_memory(per_h * ctx.threads as u64 + seeds * steps * 32)?;
    let n = usize_of(dim)?;
    let times = time_grid(tmax, usize_of(steps)?);
    let trace = if integrable {
        let h = Hamiltonian::equally_spaced(n, 4.0 / dim as f64)?;
        let psi0 = haar_state_at(n, ctx.seed, 0)?;
        relaxation_trace(&h, &psi0, &CompletedBasis::reflection(&psi0), &times)?
    } else {
        goe_ensemble_trace(n, usize_of(seeds)?, ctx.seed, &times)?
    };
    let dev = trace.deviation();
    sink.table(
        "dynamics",
        &["t", "survival", "measured", "predicted", "deviation"],
        (0..trace.times.len()).map(|i| {
            vec![
                trace.times[i].into(),
                trace.survival[i].into(),
                trace.measured[i].into(),
                trace.predicted[i].into(),
                dev[i].into(),
            ]
        }),
    )?;
    let worst = trace.max_abs_deviation();
    let tolerance = 0.05 * (dim as f64).ln();
    sink.summary(
        "dynamics",
        &json!({
            "dim": dim,
            "hamiltonian": if integrable { "equally-spaced" } else { "goe" },
            "seeds": if integrable { 1 } else { seeds },
            "max_abs_deviation": worst,
            "tolerance": tolerance,
            "within_tolerance": worst <= tolerance,
            "final_survival": trace.survival.last(),
            "final_measured": trace.measured.last(),
            "final_measured_normalized": trace.measured.last().map(|s| s / (dim as f64).ln()),
            "saturation_analytic": mean_entropy(dim - 1)?,
        }),
    )?;
    let mut failures = Vec::new();
    if !integrable && worst > tolerance {
        failures.push(format!("relaxation deviation {worst:.6} exceeds 0.05 ln N = {tolerance:.6}"));
    }
    Ok(Report {
        parameters: json!({ "dim": dim, "tmax": tmax, "steps": steps, "seeds": seeds, "integrable": integrable }),
        failures,
    })
}

/// Every numeric field of the file; a non-numeric first row is a header.
fn read_levels(path: &Path) -> Result<Vec<f64>, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::csv(path, e))?;
    let mut levels = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::csv(path, e))?;
        let parsed: Result<Vec<f64>, _> = record.iter().filter(|f| !f.is_empty()).map(str::parse).collect();
        match parsed {
            Ok(v) => levels.extend(v),
            Err(_) if row == 0 => {}
            Err(e) => {
                return Err(CliError::Usage(format!("{}: row {}: {e}", path.display(), row + 1)));
            }
        }
    }
    Ok(levels)
}

pub fn maxent(ctx: &Ctx, sink: &mut Sink, levels: &Path, energy: f64, de: f64, trials: u64) -> Result<Report, CliError> {
    let spec = Spectrum::new(read_levels(levels)?)?;
    let beta = solve_beta(&spec, energy)?;
    let gibbs = gibbs_probs(&spec, beta)?;
    let law = first_law_check(&spec, energy, de)?;
    let stationarity = verify_stationarity(&spec, &gibbs, usize_of(trials)?, ctx.seed)?;
    sink.table(
        "maxent",
        &["energy", "probability"],
        spec.energies()
            .iter()
            .zip(gibbs.probs().probs())
            .map(|(&e, &p)| vec![e.into(), p.into()]),
    )?;
    sink.summary(
        "maxent",
        &json!({
            "energy": energy,
            "beta": beta,
            "probs": gibbs.probs(),
            "entropy": gibbs.entropy(),
            "first_law_derivative": law.derivative,
            "first_law": law,
            "stationarity": stationarity,
        }),
    )?;
    let mut failures = Vec::new();
    if !stationarity.all_decreased() {
        failures.push(format!(
            "{} of {} feasible perturbations lowered the entropy",
            stationarity.decreased, stationarity.trials
        ));
    }
    Ok(Report {
        parameters: json!({ "levels": spec.energies(), "energy": energy, "de": de, "trials": trials }),
        failures,
    })
}

pub fn levy(ctx: &Ctx, sink: &mut Sink, dim: u64, samples: u64) -> Result<Report, CliError> {
    ctx.check_memory(stream_estimate(ctx, samples, 2 * size_of::<f64>(), dim))?;
    let n = usize_of(dim)?;
    let pairs = par_indexed(usize_of(samples)?, |k| {
        haar_state_at(n, ctx.seed, k).map(|s: StateVector| (s.entropy(), lipschitz_sq(&s)))
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;
    let entropies: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let eta_max = pairs.iter().map(|p| p.1).fold(0.0, f64::max);
    let sup = lipschitz_sq_sup(dim);
    let var = variance_entropy(dim)?;
    let report = empirical_tail(&entropies, mean_entropy(dim)?, &default_delta_grid(var.sqrt(), 30), dim, sup)?;
    sink.table(
        "levy",
        &["delta", "empirical_tail", "levy_bound"],
        (0..report.deltas.len()).map(|i| {
            vec![report.deltas[i].into(), report.empirical_tail[i].into(), report.levy_bound[i].into()]
        }),
    )?;
    let var_max = if dim >= 3 { Some(max_variance_bound(dim, sup)?) } else { None };
    sink.summary(
        "levy",
        &json!({
            "dim": dim,
            "samples": samples,
            "eta_sq_max_observed": eta_max,
            "eta_sq_sup": sup,
            "sup_bound_applies": sup_bound_applies(dim),
            "var_emp": Summary::of(&entropies).variance,
            "var_analytic": var,
            "var_max_levy": var_max,
            "within_bound": report.within_bound(),
            "log_tail_slope": report.log_tail_slope(),
            "bound_slope": report.bound_slope(),
        }),
    )?;
    let mut failures = Vec::new();
    if let Some(d) = report.first_violation() {
        failures.push(format!("empirical tail exceeds the bound at delta = {d:.6e}"));
    }
    if sup_bound_applies(dim) && eta_max > sup {
        failures.push(format!("sampled eta^2 = {eta_max} exceeds 4(1 - ln N)^2 = {sup}"));
    }
    Ok(Report {
        parameters: json!({ "dim": dim, "samples": samples }),
        failures,
    })
}

pub fn reproduce_all(ctx: &Ctx, sink: &mut Sink, only: &[String]) -> Result<Report, CliError> {
    let outcomes: Vec<Outcome> = if only.is_empty() {
        acceptance::run_all(ctx.seed)?
    } else {
        only.iter()
            .map(|id| {
                let id = id.trim().to_ascii_uppercase();
                acceptance::run(&id, ctx.seed)
                    .ok_or_else(|| CliError::Usage(format!("unknown criterion {id}; expected one of {:?}", acceptance::IDS)))?
                    .map_err(CliError::from)
            })
            .collect::<Result<_, _>>()?
    };
    for o in &outcomes {
        println!("{}", o.line());
    }
    let rows = outcomes.iter().flat_map(|o| {
        o.checks.iter().map(move |c| {
            vec![
                Cell::from(o.id),
                Cell::from(if o.passed() { "PASS" } else { "FAIL" }),
                Cell::S(c.label.clone()),
                c.value.into(),
                c.reference.into(),
                c.tolerance.into(),
                Cell::from(if c.informational { "info" } else if c.passed { "ok" } else { "fail" }),
            ]
        })
    });
    sink.table(
        "acceptance",
        &["criterion", "verdict", "check", "value", "reference", "tolerance", "status"],
        rows.collect::<Vec<_>>(),
    )?;
    let failed: Vec<&str> = outcomes.iter().filter(|o| !o.passed()).map(|o| o.id).collect();
    sink.summary(
        "acceptance",
        &json!({
            "criteria": outcomes,
            "passed": outcomes.len() - failed.len(),
            "failed": failed,
        }),
    )?;
    Ok(Report {
        parameters: json!({ "only": only }),
        failures: failed.iter().map(|id| format!("criterion {id} failed")).collect(),
    })
}
