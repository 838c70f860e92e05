//! Parallel, order-preserving Monte Carlo drivers and sample summaries.
//!
//! Work items are keyed by index and collected in index order, so results
//! (including floating-point sums over them) do not depend on the number of
//! worker threads.

use rayon::prelude::*;
use serde::Serialize;

use crate::bipartite::{entropy_triple, BipartiteState, EntropyTriple};
use crate::sampler::{haar_bipartite_at, haar_state_at, SampleConfig};

/// One Monte Carlo entropy draw.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropySample {
    pub index: u64,
    pub seed: u64,
    pub dim: usize,
    /// Entropy in nats.
    pub value: f64,
    /// `value / ln dim`; 0 for `dim = 1`.
    pub normalized: f64,
}

/// Evaluates `f(0..count)` in parallel and returns the results in index order.
pub fn par_indexed<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    (0..count as u64).into_par_iter().map(f).collect()
}

/// Computational-basis entropies of `cfg.count` Haar states.
pub fn entropy_samples(cfg: &SampleConfig) -> Vec<EntropySample> {
    let SampleConfig { dim, count, seed } = *cfg;
    let ln_dim = (dim as f64).ln();
    par_indexed(count, |index| {
        let value = haar_state_at(dim, seed, index)
            .expect("SampleConfig validated the dimension")
            .entropy();
        EntropySample {
            index,
            seed,
            dim,
            value,
            normalized: if dim > 1 { value / ln_dim } else { 0.0 },
        }
    })
}

/// Applies `f` to `count` Haar bipartite states of shape `n × m`.
pub fn bipartite_samples<T, F>(n: usize, m: usize, count: usize, seed: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&BipartiteState) -> T + Sync + Send,
{
    assert!(n > 0 && m > 0, "bipartite factors must be positive");
    par_indexed(count, |index| {
        let state = haar_bipartite_at(n, m, seed, index).expect("dimensions checked");
        f(&state)
    })
}

/// `(S_s, S_e, S_total)` for `count` Haar bipartite states.
pub fn entropy_triples(n: usize, m: usize, count: usize, seed: u64) -> Vec<EntropyTriple> {
    bipartite_samples(n, m, count, seed, entropy_triple)
}

/// Mean, unbiased variance and standard error of the mean.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub count: usize,
    pub mean: f64,
    pub variance: f64,
    pub std_error: f64,
}

impl Summary {
    pub fn of(values: &[f64]) -> Self {
        let count = values.len();
        if count == 0 {
            return Self {
                count,
                mean: f64::NAN,
                variance: f64::NAN,
                std_error: f64::NAN,
            };
        }
        let n = count as f64;
        let mean = values.iter().sum::<f64>() / n;
        let variance = if count > 1 {
            values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        Self {
            count,
            mean,
            variance,
            std_error: (variance / n).sqrt(),
        }
    }

    /// `|mean − reference|` in units of the standard error.
    pub fn z_score(&self, reference: f64) -> f64 {
        (self.mean - reference).abs() / self.std_error
    }
}
