//! Haar-uniform pure states.
//!
//! A state on the unit sphere of ℂᴺ is drawn as 2N independent standard
//! normals (real and imaginary parts) divided by their joint norm; the
//! Gaussian measure is rotation invariant, so the result is uniform.
//!
//! Randomness is counter based: sample `k` of a run with seed `s` is drawn
//! from ChaCha8 keyed by `s` on stream `k`. Any sample can be regenerated
//! alone, and batches give the same values in any order or thread count.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::bipartite::BipartiteState;
use crate::error::{Error, Result};
use crate::state::{check_dim, StateVector};

/// Parameters of a Monte Carlo batch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleConfig {
    pub dim: usize,
    pub count: usize,
    pub seed: u64,
}

impl SampleConfig {
    pub fn new(dim: usize, count: usize, seed: u64) -> Result<Self> {
        check_dim(dim)?;
        if count == 0 {
            return Err(Error::Dimension {
                what: "sample count",
                min: 1,
                got: 0,
            });
        }
        Ok(Self { dim, count, seed })
    }
}

/// The generator for sample `index` of the run keyed by `seed`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Fills a fresh vector with `dim` complex standard Gaussians.
pub fn gaussian_amplitudes<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<Complex64> {
    (0..dim)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect()
}

/// Draws a Haar-random state from `rng`.
pub fn haar_state_with<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<StateVector> {
    check_dim(dim)?;
    loop {
        // An all-zero draw has probability zero but would not normalize.
        if let Ok(state) = StateVector::normalized(gaussian_amplitudes(dim, rng)) {
            return Ok(state);
        }
    }
}

/// Sample 0 of the run keyed by `seed`.
pub fn haar_state(dim: usize, seed: u64) -> Result<StateVector> {
    haar_state_at(dim, seed, 0)
}

/// Sample `index` of the run keyed by `seed`.
pub fn haar_state_at(dim: usize, seed: u64, index: u64) -> Result<StateVector> {
    haar_state_with(dim, &mut sample_rng(seed, index))
}

/// Lazily yields the `cfg.count` states of a run, in index order.
pub fn haar_batch(cfg: &SampleConfig) -> impl ExactSizeIterator<Item = StateVector> {
    let SampleConfig { dim, count, seed } = *cfg;
    (0..count).map(move |k| {
        haar_state_at(dim, seed, k as u64).expect("SampleConfig validated the dimension")
    })
}

/// A Haar-random pure state of an `n × m` system ⊗ environment, with
/// coefficients `c[i][α]` laid out row-major. Same draw as
/// `haar_state(n·m, seed)` reshaped.
pub fn haar_bipartite(n: usize, m: usize, seed: u64) -> Result<BipartiteState> {
    haar_bipartite_at(n, m, seed, 0)
}

pub fn haar_bipartite_at(n: usize, m: usize, seed: u64, index: u64) -> Result<BipartiteState> {
    if n == 0 || m == 0 {
        return Err(Error::Dimension {
            what: "bipartite factor",
            min: 1,
            got: 0,
        });
    }
    let flat = haar_state_at(n * m, seed, index)?;
    BipartiteState::from_state(flat, n, m)
}
