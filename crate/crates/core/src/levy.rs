//! Concentration bounds on the sphere `S^{2N−1}`.
//!
//! With Lipschitz constant `η`, deviations of the entropy obey
//! `Pr(|S − ⟨S⟩| ≥ δ) ≤ 2 exp(−2Nδ²/(9π³η²))`. The constant `9π³` is one
//! normalization of the lemma; other references differ by O(1) factors.

use std::f64::consts::{LN_2, PI};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::state::StateVector;

/// `9π³`.
pub const LEVY_CONSTANT: f64 = 9.0 * PI * PI * PI;

/// Fewest samples `empirical_tail` accepts.
pub const MIN_SAMPLES: usize = 1000;

/// `η² = 4 Σ_j p_j (ln p_j + 1)²`; zero weights contribute nothing.
pub fn lipschitz_sq(state: &StateVector) -> f64 {
    4.0 * state
        .amplitudes()
        .iter()
        .map(|z| {
            let p = z.norm_sqr();
            if p > 0.0 {
                p * (p.ln() + 1.0).powi(2)
            } else {
                0.0
            }
        })
        .sum::<f64>()
}

/// `4(1 − ln N)²`, the supremum of `η²` for `N > e²`.
pub fn lipschitz_sq_sup(dim: u64) -> f64 {
    4.0 * (1.0 - (dim as f64).ln()).powi(2)
}

/// Whether the supremum formula applies.
pub fn sup_bound_applies(dim: u64) -> bool {
    dim as f64 > std::f64::consts::E.powi(2)
}

/// Exponent factor `f_N = 2N/(9π³η²)`.
pub fn exponent_factor(dim: u64, eta_sq: f64) -> f64 {
    2.0 * dim as f64 / (LEVY_CONSTANT * eta_sq)
}

fn check_eta_sq(eta_sq: f64) -> Result<()> {
    if eta_sq > 0.0 && eta_sq.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            function: "levy",
            value: eta_sq,
            expected: "eta_sq > 0",
        })
    }
}

/// `2 exp(−f_N δ²)`.
pub fn levy_bound(delta: f64, dim: u64, eta_sq: f64) -> Result<f64> {
    check_eta_sq(eta_sq)?;
    if delta.is_nan() || delta < 0.0 {
        return Err(Error::Domain {
            function: "levy_bound",
            value: delta,
            expected: "delta >= 0",
        });
    }
    Ok(2.0 * (-exponent_factor(dim, eta_sq) * delta * delta).exp())
}

/// `(1 + ln 2)/f_N = 9π³(1 + ln 2)η²/(2N)`.
pub fn max_variance_bound(dim: u64, eta_sq: f64) -> Result<f64> {
    check_eta_sq(eta_sq)?;
    if dim < 3 {
        return Err(Error::Dimension {
            what: "max_variance_bound",
            min: 3,
            got: dim,
        });
    }
    Ok((1.0 + LN_2) / exponent_factor(dim, eta_sq))
}

/// Density of `x = |S − ⟨S⟩|` that saturates the tail bound:
/// zero below `√(ln 2/f_N)`, `4 f_N x e^{−f_N x²}` above.
pub fn max_variance_density(x: f64, dim: u64, eta_sq: f64) -> Result<f64> {
    check_eta_sq(eta_sq)?;
    let f = exponent_factor(dim, eta_sq);
    Ok(if x * x * f < LN_2 {
        0.0
    } else {
        4.0 * f * x * (-f * x * x).exp()
    })
}

/// `n` log-spaced thresholds from `σ/3` to `10σ`.
pub fn default_delta_grid(sigma: f64, n: usize) -> Vec<f64> {
    let (a, b) = ((sigma / 3.0).ln(), (10.0 * sigma).ln());
    match n {
        0 => Vec::new(),
        1 => vec![sigma / 3.0],
        _ => (0..n)
            .map(|k| (a + (b - a) * k as f64 / (n - 1) as f64).exp())
            .collect(),
    }
}

/// Empirical exceedance fractions paired with the bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailReport {
    pub dim: u64,
    pub samples: usize,
    pub center: f64,
    pub eta_sq: f64,
    pub deltas: Vec<f64>,
    pub empirical_tail: Vec<f64>,
    pub levy_bound: Vec<f64>,
}

impl TailReport {
    pub fn within_bound(&self) -> bool {
        self.empirical_tail
            .iter()
            .zip(&self.levy_bound)
            .all(|(e, b)| e <= b)
    }

    /// First grid point where the empirical tail exceeds the bound.
    pub fn first_violation(&self) -> Option<f64> {
        self.deltas
            .iter()
            .zip(self.empirical_tail.iter().zip(&self.levy_bound))
            .find(|(_, (e, b))| e > b)
            .map(|(d, _)| *d)
    }

    /// Least-squares slope of `ln Pr` against `δ²` over grid points with
    /// nonzero tail; `None` with fewer than two such points.
    pub fn log_tail_slope(&self) -> Option<f64> {
        let pts: Vec<(f64, f64)> = self
            .deltas
            .iter()
            .zip(&self.empirical_tail)
            .filter(|(_, &t)| t > 0.0)
            .map(|(d, t)| (d * d, t.ln()))
            .collect();
        if pts.len() < 2 {
            return None;
        }
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        (sxx > 0.0).then(|| sxy / sxx)
    }

    /// `−f_N`, the slope of `ln` of the bound against `δ²`.
    pub fn bound_slope(&self) -> f64 {
        -exponent_factor(self.dim, self.eta_sq)
    }
}

pub fn empirical_tail(
    samples: &[f64],
    center: f64,
    deltas: &[f64],
    dim: u64,
    eta_sq: f64,
) -> Result<TailReport> {
    if deltas.is_empty() {
        return Err(Error::Invalid("empty delta grid".into()));
    }
    if samples.len() < MIN_SAMPLES {
        return Err(Error::Invalid(format!(
            "tail estimate needs at least {MIN_SAMPLES} samples, got {}",
            samples.len()
        )));
    }
    let mut dev: Vec<f64> = samples.iter().map(|s| (s - center).abs()).collect();
    dev.sort_by(f64::total_cmp);
    let m = dev.len() as f64;
    let empirical_tail = deltas
        .iter()
        .map(|&d| {
            let below = dev.partition_point(|&x| x < d);
            (dev.len() - below) as f64 / m
        })
        .collect();
    let levy_bound = deltas
        .iter()
        .map(|&d| levy_bound(d, dim, eta_sq))
        .collect::<Result<_>>()?;
    Ok(TailReport {
        dim,
        samples: samples.len(),
        center,
        eta_sq,
        deltas: deltas.to_vec(),
        empirical_tail,
        levy_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{mean_entropy, variance_entropy};
    use crate::montecarlo::par_indexed;
    use crate::sampler::haar_state_at;
    use approx::assert_relative_eq;
    use num_complex::Complex64;
    use proptest::prelude::*;

    #[test]
    fn lipschitz_reference_values() {
        for n in [10_usize, 110, 1000] {
            let amp = Complex64::new((1.0 / n as f64).sqrt(), 0.0);
            let uniform = StateVector::new(vec![amp; n]).unwrap();
            assert_relative_eq!(lipschitz_sq(&uniform), lipschitz_sq_sup(n as u64), max_relative = 1e-12);
        }
        assert_eq!(lipschitz_sq(&StateVector::basis(10, 3).unwrap()), 4.0);
        assert!(sup_bound_applies(8) && !sup_bound_applies(7));
    }

    #[test]
    fn lipschitz_expansion_identity() {
        for k in 0..50 {
            let s = haar_state_at(37, 2, k).unwrap();
            let p = s.probabilities();
            let a: f64 = p.iter().filter(|&&x| x > 0.0).map(|x| x * x.ln()).sum();
            let b: f64 = p.iter().filter(|&&x| x > 0.0).map(|x| x * x.ln().powi(2)).sum();
            let expanded = 4.0 * (1.0 + 2.0 * a + b);
            assert!((expanded - lipschitz_sq(&s)).abs() < 1e-10);
        }
    }

    #[test]
    fn haar_states_respect_the_supremum() {
        let sup = lipschitz_sq_sup(110);
        let worst = par_indexed(20_000, |k| lipschitz_sq(&haar_state_at(110, 3, k).unwrap()))
            .into_iter()
            .fold(0.0, f64::max);
        assert!(worst <= sup, "{worst} > {sup}");
    }

    #[test]
    fn bound_reference_values() {
        let eta = lipschitz_sq_sup(110);
        assert_eq!(levy_bound(0.0, 110, eta).unwrap(), 2.0);
        let d = (LN_2 / exponent_factor(110, eta)).sqrt();
        assert_relative_eq!(levy_bound(d, 110, eta).unwrap(), 1.0, max_relative = 1e-14);
        assert!(levy_bound(0.5, 110, eta).unwrap() < levy_bound(0.4, 110, eta).unwrap());
        assert!(levy_bound(-0.1, 110, eta).is_err());
        assert!(levy_bound(0.1, 110, 0.0).is_err());
    }

    #[test]
    fn max_variance_closed_form_matches_quadrature() {
        let (n, eta) = (110, lipschitz_sq_sup(110));
        let f = exponent_factor(n, eta);
        let a = (LN_2 / f).sqrt();
        let b = a + 40.0 / f.sqrt();
        let steps = 200_000;
        let h = (b - a) / steps as f64;
        let simpson = |g: &dyn Fn(f64) -> f64| {
            (0..=steps)
                .map(|i| {
                    let w = if i == 0 || i == steps { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
                    w * g(a + i as f64 * h)
                })
                .sum::<f64>()
                * h
                / 3.0
        };
        let rho = |x: f64| max_variance_density(x, n, eta).unwrap();
        assert_relative_eq!(simpson(&rho), 1.0, max_relative = 1e-9);
        let var = simpson(&|x| x * x * rho(x));
        assert_relative_eq!(var, max_variance_bound(n, eta).unwrap(), max_relative = 1e-9);
        assert_eq!(rho(0.5 * a), 0.0);
    }

    #[test]
    fn max_variance_bound_properties() {
        let v = max_variance_bound(110, 2.0).unwrap();
        assert_relative_eq!(max_variance_bound(110, 4.0).unwrap(), 2.0 * v, max_relative = 1e-15);
        let eta = lipschitz_sq_sup(110);
        assert!(max_variance_bound(110, eta).unwrap() / variance_entropy(110).unwrap() > 1e3);
        assert!(max_variance_bound(2, 1.0).is_err());
        for n in [10_u64, 100, 1000, 10_000, 100_000, 1_000_000] {
            assert!(variance_entropy(n).unwrap() <= max_variance_bound(n, lipschitz_sq_sup(n)).unwrap());
        }
    }

    #[test]
    fn grids() {
        let g = default_delta_grid(0.03, 30);
        assert_eq!(g.len(), 30);
        assert_relative_eq!(g[0], 0.01, max_relative = 1e-14);
        assert_relative_eq!(g[29], 0.3, max_relative = 1e-14);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn tail_edge_cases() {
        let flat = vec![1.5; 1000];
        let r = empirical_tail(&flat, 1.5, &[1e-3, 0.1], 110, 4.0).unwrap();
        assert_eq!(r.empirical_tail, vec![0.0, 0.0]);
        let r = empirical_tail(&flat, 1.5, &[0.0], 110, 4.0).unwrap();
        assert_eq!((r.empirical_tail[0], r.levy_bound[0]), (1.0, 2.0));
        assert!(r.log_tail_slope().is_none());
        assert!(empirical_tail(&flat, 1.5, &[], 110, 4.0).is_err());
        assert!(empirical_tail(&flat[..999], 1.5, &[0.1], 110, 4.0).is_err());
    }

    #[test]
    fn haar_tail_is_below_bound_and_steeper() {
        let n = 110;
        let samples = par_indexed(20_000, |k| haar_state_at(n, 8, k).unwrap().entropy());
        let sigma = variance_entropy(n as u64).unwrap().sqrt();
        let r = empirical_tail(
            &samples,
            mean_entropy(n as u64).unwrap(),
            &default_delta_grid(sigma, 30),
            n as u64,
            lipschitz_sq_sup(n as u64),
        )
        .unwrap();
        assert!(r.within_bound(), "{:?}", r.first_violation());
        assert!(r.empirical_tail.windows(2).all(|w| w[1] <= w[0]));
        assert!(r.log_tail_slope().unwrap() < r.bound_slope());
    }

    proptest! {
        #[test]
        fn sup_bound_holds(seed in 0u64..1000, n in 8usize..200) {
            let s = haar_state_at(n, seed, 0).unwrap();
            prop_assert!(lipschitz_sq(&s) <= lipschitz_sq_sup(n as u64) + 1e-12);
        }

        #[test]
        fn bound_is_decreasing(a in 0.0f64..1.0, b in 0.0f64..1.0, n in 3u64..10_000) {
            let eta = lipschitz_sq_sup(n.max(8));
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            let (x, y) = (levy_bound(lo, n, eta).unwrap(), levy_bound(hi, n, eta).unwrap());
            prop_assert!(y <= x && x <= 2.0 && y > 0.0);
        }
    }
}
