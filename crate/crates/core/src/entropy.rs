//! Entropy kernels. Natural logarithms throughout; `0 · ln 0 = 0`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::state::StateVector;

/// Nonnegative weights summing to one.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ProbabilityVector {
    probs: Vec<f64>,
}

impl ProbabilityVector {
    pub const TOLERANCE: f64 = 1e-10;

    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::Dimension {
                what: "probability vector",
                min: 1,
                got: 0,
            });
        }
        if let Some((index, &value)) = probs
            .iter()
            .enumerate()
            .find(|(_, p)| !(p.is_finite() && **p >= 0.0))
        {
            return Err(Error::NegativeProbability { index, value });
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > Self::TOLERANCE {
            return Err(Error::Normalization {
                what: "probability vector",
                total,
                tolerance: Self::TOLERANCE,
            });
        }
        Ok(Self { probs })
    }

    pub(crate) fn from_raw(probs: Vec<f64>) -> Self {
        Self { probs }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn dim(&self) -> usize {
        self.probs.len()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.probs
    }
}

/// `−p ln p` with the zero branch taken exactly.
#[inline]
pub(crate) fn xlnx_neg(p: f64) -> f64 {
    if p > 0.0 {
        -p * p.ln()
    } else {
        0.0
    }
}

/// Shannon entropy of weights that are already known to be normalized,
/// clamped to `[0, ln dim]` against rounding.
pub(crate) fn entropy_of_weights<I: IntoIterator<Item = f64>>(weights: I, dim: usize) -> f64 {
    let h: f64 = weights.into_iter().map(xlnx_neg).sum();
    // `+ 0.0` turns the `−1 · ln 1 = −0.0` of a single weight into `+0.0`.
    h.clamp(0.0, (dim as f64).ln()) + 0.0
}

/// `−Σ p_j ln p_j`.
pub fn shannon(p: &ProbabilityVector) -> f64 {
    entropy_of_weights(p.probs.iter().copied(), p.dim())
}

/// An orthonormal basis, stored as the unitary whose columns are the basis
/// states `|φ_j⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisRotation {
    unitary: DMatrix<Complex64>,
}

impl BasisRotation {
    pub const TOLERANCE: f64 = 1e-10;

    pub fn new(unitary: DMatrix<Complex64>) -> Result<Self> {
        if !unitary.is_square() || unitary.nrows() == 0 {
            return Err(Error::Matrix {
                property: "square",
                deviation: f64::NAN,
            });
        }
        let deviation = unitarity_defect(&unitary);
        if deviation > Self::TOLERANCE {
            return Err(Error::Matrix {
                property: "unitary",
                deviation,
            });
        }
        Ok(Self { unitary })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            unitary: DMatrix::identity(dim, dim),
        }
    }

    pub(crate) fn from_raw(unitary: DMatrix<Complex64>) -> Self {
        Self { unitary }
    }

    pub fn dim(&self) -> usize {
        self.unitary.nrows()
    }

    pub fn unitary(&self) -> &DMatrix<Complex64> {
        &self.unitary
    }

    /// Overlaps `⟨φ_j|ψ⟩` for every basis column `j`.
    pub fn overlaps(&self, state: &StateVector) -> Result<Vec<Complex64>> {
        if state.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: state.dim(),
            });
        }
        let z = state.amplitudes();
        Ok(self
            .unitary
            .column_iter()
            .map(|col| col.iter().zip(z).map(|(phi, psi)| phi.conj() * psi).sum())
            .collect())
    }

    /// Returns the same basis with columns reordered so that column `j` of
    /// the result is column `perm[j]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let cols: Vec<_> = perm.iter().map(|&j| self.unitary.column(j)).collect();
        Self {
            unitary: DMatrix::from_columns(&cols),
        }
    }
}

/// max |(U†U − I)_{ij}|.
pub(crate) fn unitarity_defect(u: &DMatrix<Complex64>) -> f64 {
    let gram = u.adjoint() * u;
    let n = gram.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((gram[(i, j)] - Complex64::new(target, 0.0)).norm());
        }
    }
    worst
}

/// Entropy of `|⟨φ_j|ψ⟩|²` over a basis; the computational basis when
/// `basis` is `None`.
pub fn gwvn_entropy(state: &StateVector, basis: Option<&BasisRotation>) -> Result<f64> {
    match basis {
        None => Ok(state.entropy()),
        Some(b) => {
            let overlaps = b.overlaps(state)?;
            Ok(entropy_of_weights(
                overlaps.iter().map(|z| z.norm_sqr()),
                state.dim(),
            ))
        }
    }
}

/// `f(p) = −p ln p − (1−p) ln(1−p)`.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain {
            function: "binary_entropy",
            value: p,
            expected: "0 <= p <= 1",
        });
    }
    Ok(xlnx_neg(p) + xlnx_neg(1.0 - p))
}
