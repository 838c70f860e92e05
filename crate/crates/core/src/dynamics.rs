//! Unitary relaxation of the basis entropy under a chaotic Hamiltonian.
//!
//! The entropy is measured in a basis whose first vector is the initial
//! state `|ψ₀⟩`, so it starts at zero. If the evolved state looks random
//! inside the complement of `|ψ₀⟩`, its average depends only on the
//! survival probability `p(t) = |⟨ψ₀|ψ(t)⟩|²`:
//!
//! `S̄(t) = f(p) + (1 − p)(Ψ(N) − Ψ(2))`, with `f` the binary entropy.
//!
//! Units: ħ = 1, energies dimensionless. The GOE normalization puts the
//! spectrum on the semicircle `[−2, 2]`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::bipartite::hermiticity_defect;
use crate::entropy::{binary_entropy, gwvn_entropy, BasisRotation};
use crate::error::{Error, Result};
use crate::montecarlo::par_indexed;
use crate::sampler::{gaussian_amplitudes, haar_state_at, sample_rng};
use crate::specfun::psi;
use crate::state::StateVector;

/// A Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian {
    matrix: DMatrix<Complex64>,
}

impl Hamiltonian {
    pub const TOLERANCE: f64 = 1e-10;

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
        Ok(Self { matrix })
    }

    pub fn from_real(matrix: &DMatrix<f64>) -> Result<Self> {
        Self::new(matrix.map(|x| Complex64::new(x, 0.0)))
    }

    /// Gaussian orthogonal ensemble: real symmetric, off-diagonal variance
    /// `1/N`, diagonal variance `2/N`.
    pub fn goe(dim: usize, seed: u64) -> Result<Self> {
        Self::goe_at(dim, seed, 0)
    }

    /// Member `index` of the GOE run keyed by `seed`.
    pub fn goe_at(dim: usize, seed: u64, index: u64) -> Result<Self> {
        if dim < 2 {
            return Err(Error::Dimension {
                what: "Hamiltonian",
                min: 2,
                got: dim as u64,
            });
        }
        let mut rng = sample_rng(seed, index);
        let off = (1.0 / dim as f64).sqrt();
        let diag = (2.0 / dim as f64).sqrt();
        let mut h = DMatrix::<f64>::zeros(dim, dim);
        for i in 0..dim {
            h[(i, i)] = diag * rng.sample::<f64, _>(StandardNormal);
            for j in (i + 1)..dim {
                let x = off * rng.sample::<f64, _>(StandardNormal);
                h[(i, j)] = x;
                h[(j, i)] = x;
            }
        }
        Self::from_real(&h)
    }

    /// Diagonal `H = diag(0, δ, 2δ, …)`: an integrable contrast with fully
    /// degenerate energy gaps.
    pub fn equally_spaced(dim: usize, spacing: f64) -> Result<Self> {
        if dim < 2 {
            return Err(Error::Dimension {
                what: "Hamiltonian",
                min: 2,
                got: dim as u64,
            });
        }
        let diag = DVector::from_fn(dim, |i, _| Complex64::new(spacing * i as f64, 0.0));
        Ok(Self {
            matrix: DMatrix::from_diagonal(&diag),
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// Ascending eigenvalues.
    pub fn spectrum(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self.matrix.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }
}

/// The eigendecomposition of `H`, computed once and reused for every `t`.
#[derive(Debug, Clone)]
pub struct Propagator {
    energies: Vec<f64>,
    vectors: DMatrix<Complex64>,
}

impl Propagator {
    pub fn new(h: &Hamiltonian) -> Self {
        let eig = h.matrix.clone().symmetric_eigen();
        Self {
            energies: eig.eigenvalues.iter().copied().collect(),
            vectors: eig.eigenvectors,
        }
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// Eigenvector `j` as a state.
    pub fn eigenstate(&self, j: usize) -> StateVector {
        StateVector::from_raw(self.vectors.column(j).iter().copied().collect())
    }

    /// Binds an initial state: `a_j = ⟨E_j|ψ₀⟩`.
    pub fn start(&self, psi0: &StateVector) -> Result<Evolution<'_>> {
        if psi0.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: psi0.dim(),
            });
        }
        let a = self.vectors.adjoint() * DVector::from_column_slice(psi0.amplitudes());
        Ok(Evolution {
            propagator: self,
            initial: psi0.clone(),
            coefficients: a,
        })
    }
}

/// An initial state expanded in the eigenbasis of `H`.
#[derive(Debug, Clone)]
pub struct Evolution<'a> {
    propagator: &'a Propagator,
    initial: StateVector,
    coefficients: DVector<Complex64>,
}

impl Evolution<'_> {
    /// `|ψ(t)⟩ = Σ_j a_j e^{−iE_j t} |E_j⟩`; `t = 0` returns `ψ₀` as given.
    pub fn state_at(&self, t: f64) -> StateVector {
        if t == 0.0 {
            return self.initial.clone();
        }
        let phased = DVector::from_iterator(
            self.coefficients.len(),
            self.coefficients
                .iter()
                .zip(&self.propagator.energies)
                .map(|(a, e)| a * Complex64::from_polar(1.0, -e * t)),
        );
        let psi = &self.propagator.vectors * phased;
        StateVector::from_raw(psi.iter().copied().collect())
    }

    /// `p(t) = |Σ_j |a_j|² e^{−iE_j t}|²`, clamped to `[0, 1]`.
    pub fn survival_at(&self, t: f64) -> f64 {
        let amp: Complex64 = self
            .coefficients
            .iter()
            .zip(&self.propagator.energies)
            .map(|(a, e)| Complex64::from_polar(a.norm_sqr(), -e * t))
            .sum();
        amp.norm_sqr().clamp(0.0, 1.0)
    }

    /// `Σ_j |a_j|⁴`, the infinite-time average of `p(t)` for a spectrum
    /// without degeneracies.
    pub fn inverse_participation(&self) -> f64 {
        self.coefficients.iter().map(|a| a.norm_sqr().powi(2)).sum()
    }
}

pub fn evolve(h: &Hamiltonian, psi0: &StateVector, t: f64) -> Result<StateVector> {
    Ok(Propagator::new(h).start(psi0)?.state_at(t))
}

pub fn survival(h: &Hamiltonian, psi0: &StateVector, t: f64) -> Result<f64> {
    Ok(Propagator::new(h).start(psi0)?.survival_at(t))
}

/// `f(p) + (1 − p)(Ψ(N) − Ψ(2))`.
pub fn predicted_entropy(p: f64, dim: usize) -> Result<f64> {
    if dim < 2 {
        return Err(Error::Dimension {
            what: "predicted entropy",
            min: 2,
            got: dim as u64,
        });
    }
    let f = binary_entropy(p)?;
    Ok(f + (1.0 - p) * (psi(dim as f64) - psi(2.0)))
}

/// An orthonormal basis `{|ψ₀⟩, |ξ_1⟩, …, |ξ_{N−1}⟩}` whose first vector is
/// the initial state up to a phase.
#[derive(Debug, Clone, PartialEq)]
pub struct CompletedBasis {
    rotation: BasisRotation,
}

impl CompletedBasis {
    /// Deterministic completion: the Householder reflection exchanging
    /// `e_1` and `e^{−iφ}ψ₀` (φ = arg ψ₀[0]), applied to the computational
    /// basis. For `ψ₀ = e_1` this is the computational basis itself.
    pub fn reflection(psi0: &StateVector) -> Self {
        let n = psi0.dim();
        let z0 = psi0.amplitudes()[0];
        let phase = if z0.norm() > 0.0 {
            Complex64::from_polar(1.0, -z0.arg())
        } else {
            Complex64::new(1.0, 0.0)
        };
        let mut u: Vec<Complex64> = psi0.amplitudes().iter().map(|z| z * phase).collect();
        u[0] -= Complex64::new(1.0, 0.0);
        let uu: f64 = u.iter().map(|z| z.norm_sqr()).sum();
        let mut m = DMatrix::<Complex64>::identity(n, n);
        if uu > 1e-28 {
            let scale = 2.0 / uu;
            for i in 0..n {
                for j in 0..n {
                    m[(i, j)] -= u[i] * u[j].conj() * scale;
                }
            }
        }
        Self {
            rotation: BasisRotation::from_raw(m),
        }
    }

    /// Haar-random completion: the complement vectors are uniformly
    /// distributed among orthonormal bases of the complement of `ψ₀`.
    pub fn haar(psi0: &StateVector, seed: u64, index: u64) -> Self {
        let n = psi0.dim();
        let mut rng = sample_rng(seed, index);
        let mut m = DMatrix::<Complex64>::zeros(n, n);
        m.column_mut(0).copy_from_slice(psi0.amplitudes());
        for j in 1..n {
            let g = gaussian_amplitudes(n, &mut rng);
            m.column_mut(j).copy_from_slice(&g);
        }
        let qr = m.qr();
        let r = qr.r();
        let mut q = qr.q();
        // Fix column phases so column 0 is exactly ψ₀ and the rest are Haar.
        for j in 0..n {
            let d = r[(j, j)];
            if d.norm() > 0.0 {
                let phase = d / d.norm();
                q.column_mut(j).iter_mut().for_each(|x| *x *= phase);
            }
        }
        Self {
            rotation: BasisRotation::from_raw(q),
        }
    }

    pub fn dim(&self) -> usize {
        self.rotation.dim()
    }

    pub fn rotation(&self) -> &BasisRotation {
        &self.rotation
    }

    /// Multiplies basis column `j` by `phase`.
    pub fn rephased(&self, j: usize, phase: Complex64) -> Self {
        let mut m = self.rotation.unitary().clone();
        m.column_mut(j).iter_mut().for_each(|x| *x *= phase);
        Self {
            rotation: BasisRotation::from_raw(m),
        }
    }
}

/// Basis entropy of `state` in the completed basis.
pub fn measured_entropy(state: &StateVector, basis: &CompletedBasis) -> Result<f64> {
    gwvn_entropy(state, Some(&basis.rotation))
}

/// Per-time survival probability, measured entropy and prediction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelaxationTrace {
    pub times: Vec<f64>,
    pub survival: Vec<f64>,
    pub measured: Vec<f64>,
    pub predicted: Vec<f64>,
}

impl RelaxationTrace {
    /// `S_meas − S_pred` per time.
    pub fn deviation(&self) -> Vec<f64> {
        self.measured
            .iter()
            .zip(&self.predicted)
            .map(|(m, p)| m - p)
            .collect()
    }

    pub fn max_abs_deviation(&self) -> f64 {
        self.deviation().into_iter().map(f64::abs).fold(0.0, f64::max)
    }

    /// Pointwise mean of traces sharing one time grid.
    pub fn mean(traces: &[RelaxationTrace]) -> Result<Self> {
        let first = traces
            .first()
            .ok_or_else(|| Error::Invalid("no traces to average".into()))?;
        let k = traces.len() as f64;
        let avg = |get: fn(&RelaxationTrace) -> &Vec<f64>| -> Vec<f64> {
            (0..first.times.len())
                .map(|i| traces.iter().map(|t| get(t)[i]).sum::<f64>() / k)
                .collect()
        };
        if traces.iter().any(|t| t.times != first.times) {
            return Err(Error::Invalid("traces use different time grids".into()));
        }
        Ok(Self {
            times: first.times.clone(),
            survival: avg(|t| &t.survival),
            measured: avg(|t| &t.measured),
            predicted: avg(|t| &t.predicted),
        })
    }
}

/// `steps` equally spaced times from 0 to `tmax` inclusive.
pub fn time_grid(tmax: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..steps)
            .map(|k| tmax * k as f64 / (steps - 1) as f64)
            .collect(),
    }
}

/// 200 points on `[0, 20]`.
pub fn default_time_grid() -> Vec<f64> {
    time_grid(20.0, 200)
}

pub fn relaxation_trace(
    h: &Hamiltonian,
    psi0: &StateVector,
    basis: &CompletedBasis,
    times: &[f64],
) -> Result<RelaxationTrace> {
    let dim = h.dim();
    if basis.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: basis.dim(),
        });
    }
    if times.first() != Some(&0.0) {
        return Err(Error::Invalid("time grid must start at t = 0".into()));
    }
    let propagator = Propagator::new(h);
    let evolution = propagator.start(psi0)?;
    let mut trace = RelaxationTrace {
        times: times.to_vec(),
        survival: Vec::with_capacity(times.len()),
        measured: Vec::with_capacity(times.len()),
        predicted: Vec::with_capacity(times.len()),
    };
    for &t in times {
        let p = if t == 0.0 { 1.0 } else { evolution.survival_at(t) };
        let state = evolution.state_at(t);
        trace.survival.push(p);
        trace.measured.push(measured_entropy(&state, basis)?);
        trace.predicted.push(predicted_entropy(p, dim)?);
    }
    Ok(trace)
}

/// Mean trace over `count` GOE Hamiltonians, starting from `e_1` and
/// measuring in the reflection completion of `e_1`.
pub fn goe_ensemble_trace(dim: usize, count: usize, seed: u64, times: &[f64]) -> Result<RelaxationTrace> {
    let psi0 = StateVector::basis(dim, 0)?;
    let basis = CompletedBasis::reflection(&psi0);
    let traces = par_indexed(count, |k| {
        let h = Hamiltonian::goe_at(dim, seed, k)?;
        relaxation_trace(&h, &psi0, &basis, times)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    RelaxationTrace::mean(&traces)
}

/// A unit vector with `|⟨ψ₀|v⟩|² = p` whose component orthogonal to `ψ₀`
/// is Haar-random.
pub fn state_with_survival(psi0: &StateVector, p: f64, seed: u64) -> Result<StateVector> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain {
            function: "state_with_survival",
            value: p,
            expected: "0 <= p <= 1",
        });
    }
    let n = psi0.dim();
    if n < 2 {
        return Err(Error::Dimension {
            what: "state_with_survival",
            min: 2,
            got: n as u64,
        });
    }
    let w = haar_state_at(n, seed, 0)?;
    let overlap = psi0.inner(&w)?;
    let perp: Vec<Complex64> = w
        .amplitudes()
        .iter()
        .zip(psi0.amplitudes())
        .map(|(x, a)| x - a * overlap)
        .collect();
    let perp = StateVector::normalized(perp)?;
    StateVector::normalized(
        psi0.amplitudes()
            .iter()
            .zip(perp.amplitudes())
            .map(|(a, b)| a * p.sqrt() + b * (1.0 - p).sqrt())
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::mean_entropy;
    use crate::entropy::unitarity_defect;
    use crate::montecarlo::Summary;
    use approx::assert_relative_eq;
    use std::f64::consts::{LN_2, PI};

    fn semicircle_cdf(x: f64) -> f64 {
        let x = x.clamp(-2.0, 2.0);
        0.5 + x * (4.0 - x * x).sqrt() / (4.0 * PI) + (x / 2.0).asin() / PI
    }

    #[test]
    fn goe_is_reproducible_real_symmetric() {
        let a = Hamiltonian::goe(2, 9).unwrap();
        let b = Hamiltonian::goe(2, 9).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, Hamiltonian::goe(2, 10).unwrap());
        let m = a.matrix();
        assert_eq!(m[(0, 1)], m[(1, 0)]);
        assert!(m.iter().all(|z| z.im == 0.0));
        assert!(Hamiltonian::goe(1, 0).is_err());
    }

    #[test]
    fn goe_spectrum_fills_the_semicircle() {
        let ev = Hamiltonian::goe(500, 3).unwrap().spectrum();
        let m = ev.len() as f64;
        let ks = ev
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let f = semicircle_cdf(x);
                ((i + 1) as f64 / m - f).max(f - i as f64 / m)
            })
            .fold(0.0, f64::max);
        assert!(ks < 0.05, "KS {ks}");
    }

    #[test]
    fn goe_trace_averages_to_zero() {
        let traces: Vec<f64> = (0..200)
            .map(|k| Hamiltonian::goe_at(20, 4, k).unwrap().matrix().trace().re)
            .collect();
        let s = Summary::of(&traces);
        assert!(s.mean.abs() < 4.0 * s.std_error);
        // Var Tr H = N · 2/N
        assert!((s.variance - 2.0).abs() < 0.6, "{}", s.variance);
    }

    #[test]
    fn non_hermitian_is_rejected() {
        let mut m = DMatrix::<Complex64>::zeros(2, 2);
        m[(0, 1)] = Complex64::new(1.0, 0.0);
        assert!(Hamiltonian::new(m).is_err());
    }

    #[test]
    fn evolution_basics() {
        let h = Hamiltonian::goe(40, 1).unwrap();
        let psi0 = haar_state_at(40, 2, 0).unwrap();
        assert_eq!(evolve(&h, &psi0, 0.0).unwrap(), psi0);
        assert_eq!(survival(&h, &psi0, 0.0).unwrap(), 1.0);
        let prop = Propagator::new(&h);
        let ev = prop.start(&psi0).unwrap();
        for t in [0.1, 1.0, 7.3, 50.0, 1e3] {
            let s = ev.state_at(t);
            assert!((s.norm_sqr() - 1.0).abs() < 1e-10);
            let overlap = psi0.inner(&s).unwrap().norm_sqr();
            assert!((overlap - ev.survival_at(t)).abs() < 1e-12);
            assert!((ev.survival_at(-t) - ev.survival_at(t)).abs() < 1e-12);
        }
        assert!(prop.start(&haar_state_at(3, 0, 0).unwrap()).is_err());
    }

    #[test]
    fn eigenstates_are_stationary() {
        let h = Hamiltonian::goe(30, 5).unwrap();
        let prop = Propagator::new(&h);
        let psi0 = prop.eigenstate(7);
        let basis = CompletedBasis::reflection(&psi0);
        let ev = prop.start(&psi0).unwrap();
        for t in [0.5, 3.0, 100.0] {
            assert!((ev.survival_at(t) - 1.0).abs() < 1e-10);
        }
        let trace = relaxation_trace(&h, &psi0, &basis, &time_grid(10.0, 11)).unwrap();
        assert!(trace.measured.iter().all(|s| s.abs() < 1e-8));
        assert!(trace.predicted.iter().all(|s| s.abs() < 1e-8));
    }

    #[test]
    fn long_time_survival_is_inverse_participation() {
        let h = Hamiltonian::goe(200, 8).unwrap();
        let prop = Propagator::new(&h);
        let ev = prop.start(&StateVector::basis(200, 0).unwrap()).unwrap();
        let ipr = ev.inverse_participation();
        let mut rng = sample_rng(1, 1);
        let avg = (0..4000)
            .map(|_| ev.survival_at(rng.random_range(1e3..1e5)))
            .sum::<f64>()
            / 4000.0;
        assert!((avg / ipr - 1.0).abs() < 0.1, "{avg} vs {ipr}");
        assert!(ipr > 1.0 / 200.0 && ipr < 10.0 / 200.0);
    }

    #[test]
    fn prediction_endpoints() {
        for n in [2_usize, 17, 128] {
            assert_eq!(predicted_entropy(1.0, n).unwrap(), 0.0);
            assert_relative_eq!(
                predicted_entropy(0.0, n).unwrap(),
                mean_entropy(n as u64 - 1).unwrap(),
                max_relative = 1e-13
            );
        }
        let expected = LN_2 + 0.5 * (psi(128.0) - psi(2.0));
        assert_relative_eq!(predicted_entropy(0.5, 128).unwrap(), expected, max_relative = 1e-14);
        assert!(predicted_entropy(0.5, 1).is_err());
        assert!(predicted_entropy(1.5, 10).is_err());
    }

    #[test]
    fn completions_are_unitary_and_start_with_psi0() {
        let psi0 = haar_state_at(12, 3, 3).unwrap();
        for basis in [CompletedBasis::reflection(&psi0), CompletedBasis::haar(&psi0, 4, 0)] {
            let u = basis.rotation().unitary();
            assert!(unitarity_defect(u) < 1e-12);
            let overlap: Complex64 = u.column(0).iter().zip(psi0.amplitudes()).map(|(a, b)| a.conj() * b).sum();
            assert!((overlap.norm() - 1.0).abs() < 1e-12);
            assert!(measured_entropy(&psi0, &basis).unwrap() < 1e-10);
        }
        let e1 = StateVector::basis(5, 0).unwrap();
        assert_eq!(
            CompletedBasis::reflection(&e1).rotation().unitary(),
            &DMatrix::<Complex64>::identity(5, 5)
        );
    }

    #[test]
    fn measured_entropy_ignores_column_phases() {
        let psi0 = haar_state_at(9, 1, 0).unwrap();
        let state = haar_state_at(9, 1, 1).unwrap();
        let basis = CompletedBasis::haar(&psi0, 2, 0);
        let s = measured_entropy(&state, &basis).unwrap();
        for j in [0, 4, 8] {
            let rb = basis.rephased(j, Complex64::from_polar(1.0, 0.7 * j as f64 + 0.3));
            assert_relative_eq!(measured_entropy(&state, &rb).unwrap(), s, max_relative = 1e-12);
        }
    }

    #[test]
    fn basis_average_matches_prediction() {
        let n = 32;
        let psi0 = haar_state_at(n, 10, 0).unwrap();
        for p in [0.0, 0.3, 0.8] {
            let v = state_with_survival(&psi0, p, 11).unwrap();
            assert!((psi0.inner(&v).unwrap().norm_sqr() - p).abs() < 1e-12);
            let draws: Vec<f64> = (0..1000)
                .map(|k| measured_entropy(&v, &CompletedBasis::haar(&psi0, 12, k)).unwrap())
                .collect();
            let s = Summary::of(&draws);
            let expected = predicted_entropy(p, n).unwrap();
            assert!(s.z_score(expected) < 4.0, "p={p}: {} ± {} vs {expected}", s.mean, s.std_error);
        }
    }

    #[test]
    fn trace_starts_at_rest() {
        let h = Hamiltonian::goe(16, 2).unwrap();
        let psi0 = StateVector::basis(16, 0).unwrap();
        let basis = CompletedBasis::reflection(&psi0);
        let trace = relaxation_trace(&h, &psi0, &basis, &default_time_grid()).unwrap();
        assert_eq!(trace.times.len(), 200);
        assert_eq!((trace.survival[0], trace.measured[0], trace.predicted[0]), (1.0, 0.0, 0.0));
        let ln_n = 16f64.ln();
        assert!(trace.measured.iter().chain(&trace.predicted).all(|&s| s <= ln_n + 1e-12));
        assert!(trace.survival.iter().all(|p| (0.0..=1.0).contains(p)));
        assert!(relaxation_trace(&h, &psi0, &basis, &[1.0, 2.0]).is_err());
    }

    #[test]
    fn integrable_contrast_builds() {
        let h = Hamiltonian::equally_spaced(8, 0.5).unwrap();
        assert_eq!(h.spectrum(), vec![0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5]);
        // Period 2π/δ: the state returns exactly.
        let psi0 = haar_state_at(8, 0, 0).unwrap();
        let p = survival(&h, &psi0, 2.0 * PI / 0.5).unwrap();
        assert!((p - 1.0).abs() < 1e-10);
    }

    #[test]
    fn time_grids() {
        assert_eq!(time_grid(1.0, 3), vec![0.0, 0.5, 1.0]);
        assert_eq!(time_grid(5.0, 1), vec![0.0]);
        assert!(time_grid(5.0, 0).is_empty());
        let d = default_time_grid();
        assert_eq!((d[0], d[199]), (0.0, 20.0));
    }
}
