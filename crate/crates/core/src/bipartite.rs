//! Pure states of a system ⊗ environment and their marginals.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::entropy::{entropy_of_weights, xlnx_neg};
use crate::error::{Error, Result};
use crate::state::StateVector;

/// Which factor of the product space a marginal belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    System,
    Environment,
}

/// Coefficients `c_{iα}` of `Σ c_{iα} |φ_i, ψ_α⟩`, stored row-major with the
/// system index `i` slow and the environment index `α` fast.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteState {
    n: usize,
    m: usize,
    coeffs: Vec<Complex64>,
}

impl BipartiteState {
    pub const TOLERANCE: f64 = 1e-10;

    pub fn new(n: usize, m: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::Dimension {
                what: "bipartite factor",
                min: 1,
                got: 0,
            });
        }
        if coeffs.len() != n * m {
            return Err(Error::DimensionMismatch {
                expected: n * m,
                got: coeffs.len(),
            });
        }
        let total: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
        if (total - 1.0).abs() > Self::TOLERANCE {
            return Err(Error::Normalization {
                what: "bipartite state",
                total,
                tolerance: Self::TOLERANCE,
            });
        }
        Ok(Self { n, m, coeffs })
    }

    /// Reshapes a flat `n·m` state.
    pub fn from_state(state: StateVector, n: usize, m: usize) -> Result<Self> {
        if state.dim() != n * m {
            return Err(Error::DimensionMismatch {
                expected: n * m,
                got: state.dim(),
            });
        }
        Ok(Self {
            n,
            m,
            coeffs: state.into_amplitudes(),
        })
    }

    /// The unentangled state `|u⟩ ⊗ |v⟩`.
    pub fn product(u: &StateVector, v: &StateVector) -> Self {
        let coeffs = u
            .amplitudes()
            .iter()
            .flat_map(|a| v.amplitudes().iter().map(move |b| a * b))
            .collect();
        Self {
            n: u.dim(),
            m: v.dim(),
            coeffs,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize, alpha: usize) -> Complex64 {
        self.coeffs[i * self.m + alpha]
    }

    /// The same state as a vector in the product basis `|φ_i, ψ_α⟩`.
    pub fn flatten(&self) -> StateVector {
        StateVector::from_raw(self.coeffs.clone())
    }

    fn matrix(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.n, self.m, &self.coeffs)
    }

    /// Diagonal of the reduced state on `side`: row or column weights of `|c|²`.
    pub fn diagonal_weights(&self, side: Side) -> Vec<f64> {
        match side {
            Side::System => self
                .coeffs
                .chunks_exact(self.m)
                .map(|row| row.iter().map(|c| c.norm_sqr()).sum())
                .collect(),
            Side::Environment => {
                let mut w = vec![0.0; self.m];
                for row in self.coeffs.chunks_exact(self.m) {
                    w.iter_mut().zip(row).for_each(|(acc, c)| *acc += c.norm_sqr());
                }
                w
            }
        }
    }

    pub fn dim(&self, side: Side) -> usize {
        match side {
            Side::System => self.n,
            Side::Environment => self.m,
        }
    }
}

/// A unit-trace Hermitian matrix obtained by a partial trace.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedState {
    matrix: DMatrix<Complex64>,
}

impl ReducedState {
    pub const TOLERANCE: f64 = 1e-10;
    /// Eigenvalues below `-EIGEN_GATE` mean the input was not a density matrix.
    pub const EIGEN_GATE: f64 = 1e-8;

    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() == 0 {
            return Err(Error::Matrix {
                property: "square",
                deviation: f64::NAN,
            });
        }
        let deviation = hermiticity_defect(&matrix);
        if deviation > Self::TOLERANCE {
            return Err(Error::Matrix {
                property: "Hermitian",
                deviation,
            });
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > Self::TOLERANCE || trace.im.abs() > Self::TOLERANCE {
            return Err(Error::Normalization {
                what: "reduced state trace",
                total: trace.re,
                tolerance: Self::TOLERANCE,
            });
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        self.matrix.diagonal().iter().map(|z| z.re).collect()
    }

    /// Eigenvalues in ascending order, clamped to `[0, 1]` once they pass
    /// the positivity gate.
    pub fn spectrum(&self) -> Result<Vec<f64>> {
        let mut ev: Vec<f64> = self.matrix.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        if let Some(&lowest) = ev.first() {
            if lowest < -Self::EIGEN_GATE {
                return Err(Error::NegativeEigenvalue { value: lowest });
            }
        }
        Ok(ev.into_iter().map(|x| x.clamp(0.0, 1.0)).collect())
    }
}

pub(crate) fn hermiticity_defect(m: &DMatrix<Complex64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Partial trace over the other factor: `c·c†` for the system,
/// `cᵀ·c̄` for the environment.
pub fn reduce(state: &BipartiteState, side: Side) -> ReducedState {
    let c = state.matrix();
    let matrix = match side {
        Side::System => &c * c.adjoint(),
        Side::Environment => c.transpose() * c.map(|z| z.conj()),
    };
    ReducedState { matrix }
}

/// Entropy of the diagonal of the reduced state, `−Σ p_ii ln p_ii`.
pub fn subsystem_entropy(state: &BipartiteState, side: Side) -> f64 {
    entropy_of_weights(state.diagonal_weights(side), state.dim(side))
}

/// `−Tr ρ ln ρ` from the eigenvalues of `ρ`.
pub fn von_neumann_entropy(rho: &ReducedState) -> Result<f64> {
    let h: f64 = rho.spectrum()?.into_iter().map(xlnx_neg).sum();
    Ok(h.clamp(0.0, (rho.dim() as f64).ln()))
}

/// Basis entropies of both marginals and of the whole state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyTriple {
    pub system: f64,
    pub environment: f64,
    /// Entropy of `|c_{iα}|²` in the product basis.
    pub total: f64,
}

impl EntropyTriple {
    /// `S_s + S_e − S_total`; never negative for a pure state.
    pub fn defect(&self) -> f64 {
        self.system + self.environment - self.total
    }
}

pub fn entropy_triple(state: &BipartiteState) -> EntropyTriple {
    EntropyTriple {
        system: subsystem_entropy(state, Side::System),
        environment: subsystem_entropy(state, Side::Environment),
        total: entropy_of_weights(
            state.coeffs.iter().map(|c| c.norm_sqr()),
            state.coeffs.len(),
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampler::{haar_bipartite_at, haar_state_at};
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::LN_2;

    fn bell() -> BipartiteState {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let z = Complex64::new(0.0, 0.0);
        BipartiteState::new(2, 2, vec![Complex64::new(h, 0.0), z, z, Complex64::new(h, 0.0)]).unwrap()
    }

    #[test]
    fn validation() {
        assert!(BipartiteState::new(0, 2, vec![]).is_err());
        assert!(BipartiteState::new(2, 2, vec![Complex64::new(1.0, 0.0)]).is_err());
        assert!(BipartiteState::new(1, 2, vec![Complex64::new(1.0, 0.0); 2]).is_err());
        let bad = DMatrix::from_row_slice(2, 2, &[
            Complex64::new(0.5, 0.0), Complex64::new(0.0, 1.0),
            Complex64::new(0.0, 1.0), Complex64::new(0.5, 0.0),
        ]);
        assert!(matches!(ReducedState::new(bad), Err(Error::Matrix { .. })));
        let half = DMatrix::from_diagonal_element(2, 2, Complex64::new(0.3, 0.0));
        assert!(ReducedState::new(half).is_err());
    }

    #[test]
    fn product_states_are_unentangled() {
        let u = haar_state_at(3, 1, 0).unwrap();
        let v = haar_state_at(5, 1, 1).unwrap();
        let psi = BipartiteState::product(&u, &v);
        for side in [Side::System, Side::Environment] {
            let rho = reduce(&psi, side);
            let spec = rho.spectrum().unwrap();
            assert!((spec.last().unwrap() - 1.0).abs() < 1e-12);
            assert!(von_neumann_entropy(&rho).unwrap() < 1e-10);
            assert!((rho.matrix().trace().re - 1.0).abs() < 1e-12);
        }
        let t = entropy_triple(&psi);
        assert!(t.defect().abs() < 1e-12);
    }

    #[test]
    fn uniform_product_marginals_add_exactly() {
        let u = StateVector::new(vec![Complex64::new(0.5, 0.0); 4]).unwrap();
        let v = StateVector::new(vec![Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0); 2]).unwrap();
        let t = entropy_triple(&BipartiteState::product(&u, &v));
        assert_relative_eq!(t.system, 4f64.ln(), max_relative = 1e-14);
        assert_relative_eq!(t.environment, LN_2, max_relative = 1e-14);
        assert_relative_eq!(t.system + t.environment, t.total, max_relative = 1e-14);
    }

    #[test]
    fn maximally_entangled_pair() {
        let psi = bell();
        let rho = reduce(&psi, Side::System);
        let half = Complex64::new(0.5, 0.0);
        assert!((rho.matrix()[(0, 0)] - half).norm() < 1e-15);
        assert!(rho.matrix()[(0, 1)].norm() < 1e-15);
        assert_relative_eq!(von_neumann_entropy(&rho).unwrap(), LN_2, max_relative = 1e-12);
        assert_relative_eq!(subsystem_entropy(&psi, Side::System), LN_2, max_relative = 1e-14);
        let m = DMatrix::from_diagonal_element(5, 5, Complex64::new(0.2, 0.0));
        assert_relative_eq!(
            von_neumann_entropy(&ReducedState::new(m).unwrap()).unwrap(),
            5f64.ln(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn single_column_environment_keeps_amplitudes() {
        let psi = haar_bipartite_at(6, 1, 3, 0).unwrap();
        let w = psi.diagonal_weights(Side::System);
        for (i, wi) in w.iter().enumerate() {
            assert_eq!(*wi, psi.coeff(i, 0).norm_sqr());
        }
    }

    #[test]
    fn diagonal_weights_match_reduced_matrix() {
        let psi = haar_bipartite_at(3, 4, 9, 2).unwrap();
        for side in [Side::System, Side::Environment] {
            let fast = psi.diagonal_weights(side);
            let slow = reduce(&psi, side).diagonal();
            for (a, b) in fast.iter().zip(&slow) {
                assert!((a - b).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn negative_eigenvalues_are_rejected() {
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex64::new(1.5, 0.0),
            Complex64::new(-0.5, 0.0),
        ]));
        let rho = ReducedState::new(m).unwrap();
        assert!(matches!(von_neumann_entropy(&rho), Err(Error::NegativeEigenvalue { .. })));
    }

    #[test]
    fn haar_diagonal_means_are_one_over_n() {
        let draws = 100_000_u64;
        let mut sums = [0.0_f64; 4];
        let mut sq = [0.0_f64; 4];
        for k in 0..draws {
            let w = haar_bipartite_at(4, 16, 77, k).unwrap().diagonal_weights(Side::System);
            for i in 0..4 {
                sums[i] += w[i];
                sq[i] += w[i] * w[i];
            }
        }
        let d = draws as f64;
        for i in 0..4 {
            let mean = sums[i] / d;
            let se = ((sq[i] / d - mean * mean) / d).sqrt();
            assert!((mean - 0.25).abs() < 4.0 * se, "p_{i}{i}: {mean} ± {se}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn marginal_spectra_and_orderings(n in 1_usize..6, m in 1_usize..9, seed in any::<u64>()) {
            let psi = haar_bipartite_at(n, m, seed, 0).unwrap();
            let vs = von_neumann_entropy(&reduce(&psi, Side::System)).unwrap();
            let ve = von_neumann_entropy(&reduce(&psi, Side::Environment)).unwrap();
            prop_assert!((vs - ve).abs() < 1e-8);
            let t = entropy_triple(&psi);
            prop_assert!(t.system >= vs - 1e-10);
            prop_assert!(t.environment >= ve - 1e-10);
            prop_assert!(t.defect() >= -1e-12);
            prop_assert!(t.system <= (n as f64).ln() + 1e-12);
        }
    }
}
