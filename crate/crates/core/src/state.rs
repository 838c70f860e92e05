use num_complex::Complex64;

use crate::entropy;
use crate::error::{Error, Result};

/// A unit-norm vector of complex amplitudes `z_j`, one per basis state.
///
/// The global phase is kept as sampled. Every quantity in this crate depends
/// only on `|z_j|²`, so two states differing by a phase give identical results.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Allowed deviation of `Σ|z_j|²` from 1.
    pub const NORM_TOLERANCE: f64 = 1e-12;

    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        check_dim(amplitudes.len())?;
        let total = norm_sqr(&amplitudes);
        if (total - 1.0).abs() > Self::NORM_TOLERANCE {
            return Err(Error::Normalization {
                what: "state vector",
                total,
                tolerance: Self::NORM_TOLERANCE,
            });
        }
        Ok(Self { amplitudes })
    }

    /// Rescales `amplitudes` to unit norm. A zero vector is rejected.
    pub fn normalized(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        check_dim(amplitudes.len())?;
        let total = norm_sqr(&amplitudes);
        if !(total > 0.0 && total.is_finite()) {
            return Err(Error::Normalization {
                what: "state vector",
                total,
                tolerance: Self::NORM_TOLERANCE,
            });
        }
        let scale = total.sqrt().recip();
        amplitudes.iter_mut().for_each(|z| *z *= scale);
        Ok(Self { amplitudes })
    }

    /// The computational basis state `e_index`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        check_dim(dim)?;
        if index >= dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: index + 1,
            });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self { amplitudes })
    }

    /// Wraps amplitudes that are unit-norm up to rounding of an upstream
    /// unitary map. Callers that need the norm checked use [`Self::new`].
    pub(crate) fn from_raw(amplitudes: Vec<Complex64>) -> Self {
        debug_assert!(!amplitudes.is_empty());
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amplitudes)
    }

    /// `|z_j|²` in the computational basis.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|z| z.norm_sqr()).collect()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Entropy of `|z_j|²` in the computational basis.
    pub fn entropy(&self) -> f64 {
        entropy::entropy_of_weights(self.amplitudes.iter().map(|z| z.norm_sqr()), self.dim())
    }
}

fn norm_sqr(amplitudes: &[Complex64]) -> f64 {
    amplitudes.iter().map(|z| z.norm_sqr()).sum()
}

pub(crate) fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 {
        Err(Error::Dimension {
            what: "state",
            min: 1,
            got: 0,
        })
    } else {
        Ok(())
    }
}
