//! Maximal basis entropy at fixed mean energy.
//!
//! Maximizing the entropy of the eigenstate weights `p_i` subject to
//! `Σ p_i = 1` and `Σ p_i E_i = E` gives `ln p_i` linear in `E_i`, that is
//! `p_i ∝ e^{−βE_i}`. Only the weights enter; coherences between
//! eigenstates are not constrained by this variational problem.
//!
//! Negative β (population inversion) is allowed.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::entropy::{shannon, xlnx_neg, ProbabilityVector};
use crate::error::{Bound, Error, Result};
use crate::sampler::sample_rng;

/// Energy levels in ascending order; degeneracies are repeated entries.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    energies: Vec<f64>,
}

impl Spectrum {
    pub fn new(mut energies: Vec<f64>) -> Result<Self> {
        if energies.len() < 2 {
            return Err(Error::Dimension {
                what: "spectrum",
                min: 2,
                got: energies.len() as u64,
            });
        }
        if let Some(&bad) = energies.iter().find(|e| !e.is_finite()) {
            return Err(Error::Domain {
                function: "spectrum",
                value: bad,
                expected: "finite energies",
            });
        }
        energies.sort_by(f64::total_cmp);
        Ok(Self { energies })
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.energies[0]
    }

    pub fn max(&self) -> f64 {
        self.energies[self.energies.len() - 1]
    }

    /// Mean energy at β = 0.
    pub fn uniform_mean(&self) -> f64 {
        self.energies.iter().sum::<f64>() / self.len() as f64
    }

    fn width(&self) -> f64 {
        self.max() - self.min()
    }
}

/// Shifted Boltzmann factors `e^{−β(E_i − E_ref)}` with `E_ref` chosen so
/// every exponent is ≤ 0, and that reference.
fn boltzmann(spec: &Spectrum, beta: f64) -> (Vec<f64>, f64) {
    let reference = if beta >= 0.0 { spec.min() } else { spec.max() };
    let w = spec
        .energies
        .iter()
        .map(|e| (-beta * (e - reference)).exp())
        .collect();
    (w, reference)
}

/// `ln p_i` evaluated without forming `p_i`, finite even where `p_i`
/// underflows.
fn log_probs(spec: &Spectrum, beta: f64) -> Vec<f64> {
    let (w, reference) = boltzmann(spec, beta);
    let ln_z = w.iter().sum::<f64>().ln();
    spec.energies
        .iter()
        .map(|e| -beta * (e - reference) - ln_z)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GibbsState {
    beta: f64,
    probs: ProbabilityVector,
}

impl GibbsState {
    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn probs(&self) -> &ProbabilityVector {
        &self.probs
    }

    pub fn entropy(&self) -> f64 {
        shannon(&self.probs)
    }
}

pub fn gibbs_probs(spec: &Spectrum, beta: f64) -> Result<GibbsState> {
    if !beta.is_finite() {
        return Err(Error::Domain {
            function: "gibbs_probs",
            value: beta,
            expected: "finite beta",
        });
    }
    let (w, _) = boltzmann(spec, beta);
    let z: f64 = w.iter().sum();
    Ok(GibbsState {
        beta,
        probs: ProbabilityVector::from_raw(w.into_iter().map(|x| x / z).collect()),
    })
}

/// `⟨E⟩(β)` and `Var E(β)`, accumulated relative to the shift reference.
fn energy_moments(spec: &Spectrum, beta: f64) -> (f64, f64) {
    let (w, reference) = boltzmann(spec, beta);
    let z: f64 = w.iter().sum();
    let (mut m1, mut m2) = (0.0, 0.0);
    for (wi, e) in w.iter().zip(&spec.energies) {
        let d = e - reference;
        m1 += wi * d;
        m2 += wi * d * d;
    }
    let (m1, m2) = (m1 / z, m2 / z);
    (reference + m1, (m2 - m1 * m1).max(0.0))
}

pub fn mean_energy(spec: &Spectrum, beta: f64) -> f64 {
    energy_moments(spec, beta).0
}

/// Inverse temperature whose Gibbs weights have mean energy `energy`.
///
/// Newton iteration on the decreasing map `β ↦ ⟨E⟩(β)`, kept inside a
/// bracket and falling back to bisection when a step leaves it.
pub fn solve_beta(spec: &Spectrum, energy: f64) -> Result<f64> {
    if !energy.is_finite() {
        return Err(Error::Domain {
            function: "solve_beta",
            value: energy,
            expected: "finite energy",
        });
    }
    if energy <= spec.min() {
        return Err(Error::EnergyOutOfRange {
            energy,
            side: Bound::Below,
            bound: spec.min(),
        });
    }
    if energy >= spec.max() {
        return Err(Error::EnergyOutOfRange {
            energy,
            side: Bound::Above,
            bound: spec.max(),
        });
    }
    let uniform = spec.uniform_mean();
    if energy == uniform {
        return Ok(0.0);
    }
    let f = |b: f64| mean_energy(spec, b) - energy;

    // Expand away from 0 until the sign changes; ⟨E⟩ saturates at the
    // band edge, which lies strictly beyond `energy`.
    let sign = if energy < uniform { 1.0 } else { -1.0 };
    let mut far = sign / spec.width();
    while f(far) * sign > 0.0 {
        far *= 2.0;
        if !far.is_finite() {
            return Err(Error::Invalid(format!(
                "no finite beta reaches energy {energy}"
            )));
        }
    }
    // f(lo) > 0 > f(hi)
    let (mut lo, mut hi) = if sign > 0.0 { (0.0, far) } else { (far, 0.0) };
    let mut beta = 0.5 * (lo + hi);
    for _ in 0..500 {
        let (mean, var) = energy_moments(spec, beta);
        let r = mean - energy;
        if r == 0.0 {
            break;
        }
        if r > 0.0 {
            lo = beta;
        } else {
            hi = beta;
        }
        let newton = beta + r / var;
        let next = if var > 0.0 && newton > lo.min(hi) && newton < lo.max(hi) {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - beta).abs() <= 4.0 * f64::EPSILON * beta.abs().max(f64::MIN_POSITIVE) {
            beta = next;
            break;
        }
        beta = next;
    }
    Ok(beta)
}

/// Outcome of random feasible perturbations around a Gibbs state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StationarityReport {
    /// Dimension of `{ω : Σω_i = 0, Σω_i E_i = 0}`.
    pub feasible_dim: usize,
    pub trials: usize,
    /// Largest `|dS/dε|` at ε = 0 over unit-norm directions.
    pub max_first_order: f64,
    /// Trials where the entropy fell at both `+ε` and `−ε`.
    pub decreased: usize,
}

impl StationarityReport {
    /// No nonzero feasible direction exists, so stationarity is vacuous.
    pub fn is_degenerate(&self) -> bool {
        self.feasible_dim == 0
    }

    pub fn all_decreased(&self) -> bool {
        self.decreased == self.trials
    }
}

/// Orthonormal basis of span{1, E} inside `R^K`.
fn constraint_basis(spec: &Spectrum) -> Vec<Vec<f64>> {
    let k = spec.len();
    let one = vec![1.0 / (k as f64).sqrt(); k];
    let mean = spec.uniform_mean();
    let centered: Vec<f64> = spec.energies.iter().map(|e| e - mean).collect();
    let norm = centered.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm <= 1e-12 * spec.energies.iter().map(|e| e.abs()).fold(1.0, f64::max) {
        vec![one]
    } else {
        vec![one, centered.into_iter().map(|x| x / norm).collect()]
    }
}

/// A unit vector orthogonal to the constraints, or `None` when the
/// feasible space is trivial.
fn feasible_direction<R: Rng>(constraints: &[Vec<f64>], k: usize, rng: &mut R) -> Option<Vec<f64>> {
    if constraints.len() >= k {
        return None;
    }
    loop {
        let mut w: Vec<f64> = (0..k).map(|_| rng.sample(StandardNormal)).collect();
        for c in constraints {
            let dot: f64 = w.iter().zip(c).map(|(a, b)| a * b).sum();
            w.iter_mut().zip(c).for_each(|(a, b)| *a -= dot * b);
        }
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-8 {
            return Some(w.into_iter().map(|x| x / norm).collect());
        }
    }
}

fn raw_entropy(p: &[f64]) -> f64 {
    p.iter().map(|&x| xlnx_neg(x)).sum()
}

pub fn verify_stationarity(
    spec: &Spectrum,
    state: &GibbsState,
    trials: usize,
    seed: u64,
) -> Result<StationarityReport> {
    let k = spec.len();
    if state.probs.dim() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            got: state.probs.dim(),
        });
    }
    let constraints = constraint_basis(spec);
    let feasible_dim = k - constraints.len();
    let mut report = StationarityReport {
        feasible_dim,
        trials: 0,
        max_first_order: 0.0,
        decreased: 0,
    };
    if feasible_dim == 0 {
        return Ok(report);
    }
    let p = state.probs.probs();
    let ln_p = log_probs(spec, state.beta);
    let s0 = raw_entropy(p);
    let mut rng = sample_rng(seed, 0);
    for _ in 0..trials {
        let w = feasible_direction(&constraints, k, &mut rng).expect("feasible space is nontrivial");
        // dS/dε = −Σ ω_i (ln p_i + 1); the +1 drops out since Σω_i = 0.
        let first: f64 = -w.iter().zip(&ln_p).map(|(a, l)| a * l).sum::<f64>();
        report.max_first_order = report.max_first_order.max(first.abs());

        let reach = w
            .iter()
            .zip(p)
            .filter(|(a, _)| a.abs() > 0.0)
            .map(|(a, q)| q / a.abs())
            .fold(f64::INFINITY, f64::min);
        let eps = (0.5 * reach).min(1e-3);
        let lower = [eps, -eps].iter().all(|&e| {
            let q: Vec<f64> = p.iter().zip(&w).map(|(a, b)| (a + e * b).max(0.0)).collect();
            raw_entropy(&q) < s0
        });
        report.trials += 1;
        if lower {
            report.decreased += 1;
        }
    }
    Ok(report)
}

/// Central-difference `dS/dE` compared with the solved β.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FirstLawReport {
    pub energy: f64,
    pub step: f64,
    pub beta: f64,
    pub derivative: f64,
    /// `derivative / beta`; NaN at β = 0.
    pub ratio: f64,
}

impl FirstLawReport {
    /// `|dS/dE − β| ≤ tol · max(|β|, 1)`.
    pub fn agrees(&self, tol: f64) -> bool {
        (self.derivative - self.beta).abs() <= tol * self.beta.abs().max(1.0)
    }
}

pub fn gibbs_entropy_at(spec: &Spectrum, energy: f64) -> Result<f64> {
    Ok(gibbs_probs(spec, solve_beta(spec, energy)?)?.entropy())
}

pub fn first_law_check(spec: &Spectrum, energy: f64, step: f64) -> Result<FirstLawReport> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::Domain {
            function: "first_law_check",
            value: step,
            expected: "positive step",
        });
    }
    let beta = solve_beta(spec, energy)?;
    let up = gibbs_entropy_at(spec, energy + step)?;
    let down = gibbs_entropy_at(spec, energy - step)?;
    let derivative = (up - down) / (2.0 * step);
    Ok(FirstLawReport {
        energy,
        step,
        beta,
        derivative,
        ratio: if beta == 0.0 { f64::NAN } else { derivative / beta },
    })
}
