//! Closed-form Haar averages.
//!
//! Every result here is a ratio of gamma functions or a combination of
//! digamma/trigamma values. Γ ratios are taken as exponentials of stable
//! log-gamma differences, since Γ itself overflows near 171.
//!
//! Notation: `dim = N` for a single system; a bipartite system has `n`
//! system levels and `m` environment levels with `N = n·m`. A product moment
//! splits the `N` amplitudes into `n` consecutive blocks of size `m` and
//! averages `∏ T_k^{α_k}`, where `T_k` is the weight of block `k`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::specfun::{ln_gamma, ln_gamma_ratio, psi, psi1, EULER_GAMMA};

/// `π²/3 − 3`, the coefficient of the `1/N` leading term of the entropy
/// variance (≈ 0.2899, often rounded to 0.3).
pub const VARIANCE_LEADING_COEFFICIENT: f64 = PI * PI / 3.0 - 3.0;

/// `1 − γ`, the large-dimension limit of the additivity defect.
pub const ADDITIVITY_LIMIT: f64 = 1.0 - EULER_GAMMA;

fn positive(what: &'static str, value: u64) -> Result<f64> {
    if value == 0 {
        Err(Error::Dimension {
            what,
            min: 1,
            got: 0,
        })
    } else {
        Ok(value as f64)
    }
}

fn exponent(lambda: f64) -> Result<f64> {
    if lambda >= 0.0 && lambda.is_finite() {
        Ok(lambda)
    } else {
        Err(Error::Domain {
            function: "moment",
            value: lambda,
            expected: "lambda >= 0",
        })
    }
}

fn product(n: u64, m: u64) -> Result<f64> {
    positive("system", n)?;
    positive("environment", m)?;
    n.checked_mul(m)
        .map(|nm| nm as f64)
        .ok_or_else(|| Error::Invalid(format!("n·m overflows: {n}·{m}")))
}

/// `⟨|z_j|^{2λ}⟩ = Γ(N)Γ(1+λ)/Γ(N+λ)`.
pub fn moment_z(lambda: f64, dim: u64) -> Result<f64> {
    let lambda = exponent(lambda)?;
    let n = positive("dim", dim)?;
    Ok((ln_gamma(1.0 + lambda) - ln_gamma_ratio(n, lambda)).exp())
}

/// `⟨S⟩ = Ψ(N+1) − Ψ(2) = H_N − 1`.
pub fn mean_entropy(dim: u64) -> Result<f64> {
    let n = positive("dim", dim)?;
    Ok(psi(n + 1.0) - psi(2.0))
}

/// `σ²_S = (π²/3 − 2)/(N+1) − Ψ₁(N+1)`; exactly 0 at `N = 1`.
pub fn variance_entropy(dim: u64) -> Result<f64> {
    let n = positive("dim", dim)?;
    if dim == 1 {
        return Ok(0.0);
    }
    Ok(((PI * PI / 3.0 - 2.0) / (n + 1.0) - psi1(n + 1.0)).max(0.0))
}

/// Mean and variance of the entropy of a Haar state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyStats {
    pub dim: u64,
    pub mean: f64,
    pub variance: f64,
}

impl EntropyStats {
    pub fn of(dim: u64) -> Result<Self> {
        Ok(Self {
            dim,
            mean: mean_entropy(dim)?,
            variance: variance_entropy(dim)?,
        })
    }

    /// `mean / ln N`; 0 for `N = 1`.
    pub fn mean_over_ln_dim(&self) -> f64 {
        if self.dim > 1 {
            self.mean / (self.dim as f64).ln()
        } else {
            0.0
        }
    }
}

/// `⟨p_ii^λ⟩ = Γ(mn)Γ(m+λ)/(Γ(mn+λ)Γ(m))` for a diagonal entry of the
/// reduced state.
pub fn subsystem_moment(lambda: f64, n: u64, m: u64) -> Result<f64> {
    let lambda = exponent(lambda)?;
    let nm = product(n, m)?;
    Ok((ln_gamma_ratio(m as f64, lambda) - ln_gamma_ratio(nm, lambda)).exp())
}

/// `⟨S(ρ_s)⟩ = Ψ(nm+1) − Ψ(m+1)`.
pub fn subsystem_mean(n: u64, m: u64) -> Result<f64> {
    let nm = product(n, m)?;
    Ok(psi(nm + 1.0) - psi(m as f64 + 1.0))
}

/// `σ²_{ρ_s} = ((m+1)/(N+1))Ψ₁(m+1) − Ψ₁(N+1)`; exactly 0 at `n = 1`.
pub fn subsystem_variance(n: u64, m: u64) -> Result<f64> {
    let nm = product(n, m)?;
    let mf = m as f64;
    Ok(((mf + 1.0) / (nm + 1.0) * psi1(mf + 1.0) - psi1(nm + 1.0)).max(0.0))
}

/// `⟨S(ρ_s) + S(ρ_e) − S(ρ)⟩ = Ψ(mn+1) − Ψ(m+1) − Ψ(n+1) + Ψ(2)`.
pub fn additivity_defect(n: u64, m: u64) -> Result<f64> {
    let nm = product(n, m)?;
    Ok(psi(nm + 1.0) - psi(m as f64 + 1.0) - psi(n as f64 + 1.0) + psi(2.0))
}

/// Page's approximation `ln n − n/(2m)` for the mean entanglement entropy of
/// the smaller factor (`n ≤ m`).
pub fn page_mean_approx(n: u64, m: u64) -> Result<f64> {
    let nf = positive("system", n)?;
    let mf = positive("environment", m)?;
    Ok(nf.ln() - nf / (2.0 * mf))
}

/// Page's exact mean `Σ_{k=m+1}^{nm} 1/k − (n−1)/(2m)`, for `n ≤ m`.
pub fn page_mean_exact(n: u64, m: u64) -> Result<f64> {
    let nm = product(n, m)?;
    if n > m {
        return page_mean_exact(m, n);
    }
    let mf = m as f64;
    let harmonic_tail = psi(nm + 1.0) - psi(mf + 1.0);
    Ok(harmonic_tail - (n as f64 - 1.0) / (2.0 * mf))
}

/// Exponents `α_k` for `n` blocks of size `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentQuery {
    alphas: Vec<f64>,
    block_size: u64,
}

impl MomentQuery {
    pub fn new(alphas: Vec<f64>, block_size: u64) -> Result<Self> {
        if alphas.is_empty() {
            return Err(Error::Dimension {
                what: "block count",
                min: 1,
                got: 0,
            });
        }
        positive("block size", block_size)?;
        for &a in &alphas {
            exponent(a)?;
        }
        Ok(Self { alphas, block_size })
    }

    /// One block raised to `lambda`, the other `n − 1` to zero.
    pub fn single(lambda: f64, n: u64, m: u64) -> Result<Self> {
        positive("block count", n)?;
        let mut alphas = vec![0.0; n as usize];
        alphas[0] = lambda;
        Self::new(alphas, m)
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn block_size(&self) -> u64 {
        self.block_size
    }

    pub fn blocks(&self) -> usize {
        self.alphas.len()
    }

    pub fn total_dim(&self) -> u64 {
        self.block_size * self.alphas.len() as u64
    }
}

/// `⟨∏ T_k^{α_k}⟩ = Γ(N)/Γⁿ(m) · ∏_k Γ(α_k + m) / Γ(Σα + N)`.
pub fn product_moment(q: &MomentQuery) -> f64 {
    let m = q.block_size as f64;
    let nm = q.total_dim() as f64;
    let total: f64 = q.alphas.iter().sum();
    let numerator: f64 = q.alphas.iter().map(|&a| ln_gamma_ratio(m, a)).sum();
    (numerator - ln_gamma_ratio(nm, total)).exp()
}

/// The three λ-derivatives of block moments that the variance formulas are
/// assembled from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DerivativeKind {
    /// `d⟨T_1^α⟩/dα`
    Single,
    /// `∂²⟨T_1^{α₁+α₂}⟩/∂α₁∂α₂`
    SameBlock,
    /// `∂²⟨T_1^{α₁} T_2^{α₂}⟩/∂α₁∂α₂`
    CrossBlock,
}

/// Evaluates a block-moment derivative at exponents `(a1, a2)`; `a2` is
/// ignored for [`DerivativeKind::Single`].
pub fn moment_derivative_at(kind: DerivativeKind, a1: f64, a2: f64, n: u64, m: u64) -> Result<f64> {
    let nm = product(n, m)?;
    let mf = m as f64;
    exponent(a1)?;
    exponent(a2)?;
    Ok(match kind {
        DerivativeKind::Single => {
            let coef = (ln_gamma_ratio(mf, a1) - ln_gamma_ratio(nm, a1)).exp();
            coef * (psi(a1 + mf) - psi(a1 + nm))
        }
        DerivativeKind::SameBlock => {
            let a = a1 + a2;
            let coef = (ln_gamma_ratio(mf, a) - ln_gamma_ratio(nm, a)).exp();
            let d = psi(a + mf) - psi(a + nm);
            coef * (d * d + psi1(a + mf) - psi1(a + nm))
        }
        DerivativeKind::CrossBlock => {
            let a = a1 + a2;
            let coef = (ln_gamma_ratio(mf, a1) + ln_gamma_ratio(mf, a2) - ln_gamma_ratio(nm, a))
                .exp();
            coef * ((psi(a1 + mf) - psi(a + nm)) * (psi(a2 + mf) - psi(a + nm)) - psi1(a + nm))
        }
    })
}

/// A block-moment derivative at unit exponents, where the entropy lives.
pub fn moment_derivative(kind: DerivativeKind, n: u64, m: u64) -> Result<f64> {
    moment_derivative_at(kind, 1.0, 1.0, n, m)
}

/// `⟨S⟩ = −n · d⟨T^α⟩/dα |₁`.
pub fn mean_from_derivatives(n: u64, m: u64) -> Result<f64> {
    Ok(-(n as f64) * moment_derivative(DerivativeKind::Single, n, m)?)
}

/// `σ² = n(n−1)·cross + n·same − ⟨S⟩²`. With `m = 1` this is the
/// single-system variance; otherwise the subsystem variance.
pub fn variance_from_derivatives(n: u64, m: u64) -> Result<f64> {
    let nf = n as f64;
    let same = moment_derivative(DerivativeKind::SameBlock, n, m)?;
    let cross = if n > 1 {
        moment_derivative(DerivativeKind::CrossBlock, n, m)?
    } else {
        0.0
    };
    let mean = mean_from_derivatives(n, m)?;
    Ok(nf * (nf - 1.0) * cross + nf * same - mean * mean)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn harmonic(n: u64) -> f64 {
        (1..=n).rev().map(|k| 1.0 / k as f64).sum()
    }

    #[test]
    fn moment_z_reference_values() {
        for n in [1_u64, 2, 7, 110, 5210, 1_000_000] {
            assert_relative_eq!(moment_z(1.0, n).unwrap(), 1.0 / n as f64, max_relative = 1e-13);
            assert_relative_eq!(moment_z(0.0, n).unwrap(), 1.0, max_relative = 1e-15);
        }
        assert_relative_eq!(moment_z(2.0, 2).unwrap(), 1.0 / 3.0, max_relative = 1e-14);
        assert!(moment_z(-0.5, 3).is_err());
        assert!(moment_z(1.0, 0).is_err());
    }

    #[test]
    fn mean_entropy_reference_values() {
        assert_eq!(mean_entropy(1).unwrap(), 0.0);
        assert_relative_eq!(mean_entropy(2).unwrap(), 0.5, max_relative = 1e-14);
        for n in [3_u64, 10, 110, 510, 5210, 10_000] {
            assert_relative_eq!(mean_entropy(n).unwrap(), harmonic(n) - 1.0, max_relative = 1e-13);
        }
    }

    #[test]
    fn mean_entropy_reaches_99_percent_of_ln_n() {
        let n = 10_000_000_000_000_000_000_u64;
        let ratio = mean_entropy(n).unwrap() / (n as f64).ln();
        assert!(ratio >= 0.99, "ratio {ratio}");
    }

    #[test]
    fn mean_entropy_asymptotics_converge_like_one_over_n() {
        let err = |n: u64| mean_entropy(n).unwrap() - ((n as f64).ln() + EULER_GAMMA - 1.0);
        let (e2, e4, e6) = (err(100), err(10_000), err(1_000_000));
        assert!((e4 / e2 - 1e-2).abs() < 2e-4, "{}", e4 / e2);
        assert!((e6 / e4 - 1e-2).abs() < 2e-4, "{}", e6 / e4);
    }

    #[test]
    fn variance_reference_values() {
        assert_eq!(variance_entropy(1).unwrap(), 0.0);
        // Direct integral over |z_1|² ~ U(0,1) for N = 2.
        let v2 = 4.0 / 27.0 + 2.0 * (37.0 / 108.0 - PI * PI / 36.0) - 0.25;
        assert_relative_eq!(variance_entropy(2).unwrap(), v2, max_relative = 1e-12);
        assert_relative_eq!(VARIANCE_LEADING_COEFFICIENT, 0.289_868_133_696_452_9, max_relative = 1e-15);
        let n = 1_000_000_u64;
        assert_relative_eq!(
            n as f64 * variance_entropy(n).unwrap(),
            VARIANCE_LEADING_COEFFICIENT,
            max_relative = 1e-5
        );
    }

    #[test]
    fn variances_are_positive_and_decreasing() {
        // σ² rises from N = 2 to N = 3 and falls afterwards.
        assert!(variance_entropy(2).unwrap() < variance_entropy(3).unwrap());
        let dims: Vec<u64> = (3..400).chain([1000, 10_000, 100_000]).collect();
        for w in dims.windows(2) {
            let (a, b) = (variance_entropy(w[0]).unwrap(), variance_entropy(w[1]).unwrap());
            assert!(a > 0.0 && b > 0.0 && b < a, "N = {}", w[0]);
        }
        for m in [2_u64, 5, 32] {
            for w in (3..60_u64).collect::<Vec<_>>().windows(2) {
                let a = subsystem_variance(w[0], m).unwrap();
                let b = subsystem_variance(w[1], m).unwrap();
                assert!(a > 0.0 && b > 0.0 && b < a, "n = {}, m = {m}", w[0]);
            }
        }
    }

    #[test]
    fn subsystem_reference_values() {
        for (n, m) in [(1, 1), (4, 16), (8, 32), (3, 100)] {
            assert_relative_eq!(subsystem_moment(1.0, n, m).unwrap(), 1.0 / n as f64, max_relative = 1e-13);
        }
        assert_relative_eq!(subsystem_moment(2.0, 2, 1).unwrap(), 1.0 / 3.0, max_relative = 1e-14);
        assert_relative_eq!(subsystem_moment(2.0, 2, 3).unwrap(), 2.0 / 7.0, max_relative = 1e-14);

        for m in [1_u64, 5, 64] {
            assert_eq!(subsystem_mean(1, m).unwrap(), 0.0);
            assert_eq!(subsystem_variance(1, m).unwrap(), 0.0);
        }
        for n in [2_u64, 9, 110] {
            assert_relative_eq!(subsystem_mean(n, 1).unwrap(), mean_entropy(n).unwrap(), max_relative = 1e-14);
            assert_relative_eq!(
                subsystem_variance(n, 1).unwrap(),
                variance_entropy(n).unwrap(),
                max_relative = 1e-10
            );
        }
        let s = subsystem_mean(8, 32).unwrap();
        assert_relative_eq!(s, psi(257.0) - psi(33.0), max_relative = 1e-15);
        assert!(s < 8f64.ln() && s > 8f64.ln() - 0.1);
    }

    #[test]
    fn subsystem_variance_is_controlled_by_the_environment() {
        // 1/(2mN) with relative corrections of order 1/m and m/N.
        for (n, m) in [(100_u64, 50_u64), (1000, 100), (400, 400), (20, 1000)] {
            let (nm, mf) = ((n * m) as f64, m as f64);
            let v = subsystem_variance(n, m).unwrap();
            let leading = 1.0 / (2.0 * mf * nm);
            let rel = (v / leading - 1.0).abs();
            assert!(rel <= 1.0 / mf + 2.0 * mf / nm, "n={n} m={m}: rel {rel}");
        }
    }

    #[test]
    fn additivity_defect_limits() {
        assert!(additivity_defect(1, 1).unwrap().abs() < 1e-15);
        let d = additivity_defect(64, 64).unwrap();
        assert!((d - ADDITIVITY_LIMIT).abs() <= 128.0 / 4096.0, "{d}");
        let far = additivity_defect(10_000, 10_000).unwrap();
        assert!((far - ADDITIVITY_LIMIT).abs() < 2e-4);
    }

    #[test]
    fn page_formulas() {
        assert_relative_eq!(page_mean_approx(4, 64).unwrap(), 4f64.ln() - 4.0 / 128.0, max_relative = 1e-15);
        let exact: f64 = (65..=256).map(|k| 1.0 / k as f64).sum::<f64>() - 3.0 / 128.0;
        assert_relative_eq!(page_mean_exact(4, 64).unwrap(), exact, max_relative = 1e-13);
        assert_eq!(page_mean_exact(1, 9).unwrap(), 0.0);
    }

    #[test]
    fn product_moment_reference_values() {
        let q = |a: &[f64], m| MomentQuery::new(a.to_vec(), m).unwrap();
        for m in [1_u64, 3, 40] {
            assert_relative_eq!(product_moment(&q(&[1.0], m)), 1.0, max_relative = 1e-14);
            assert_relative_eq!(product_moment(&q(&[0.0, 0.0, 0.0], m)), 1.0, max_relative = 1e-14);
        }
        assert_relative_eq!(product_moment(&q(&[1.0, 0.0], 3)), 0.5, max_relative = 1e-14);
        // Γ(6)Γ(4)²/(Γ(3)²Γ(8)) = 120·36/(4·5040)
        assert_relative_eq!(product_moment(&q(&[1.0, 1.0], 3)), 3.0 / 14.0, max_relative = 1e-14);
        assert!(MomentQuery::new(vec![], 2).is_err());
        assert!(MomentQuery::new(vec![1.0], 0).is_err());
        assert!(MomentQuery::new(vec![-1.0], 2).is_err());
    }

    #[test]
    fn single_amplitude_and_block_moments_agree() {
        for n in 1..=50_u64 {
            for lambda in [0.0, 1.0, 2.0, 3.0] {
                let via_blocks = product_moment(&MomentQuery::single(lambda, n, 1).unwrap());
                assert_relative_eq!(moment_z(lambda, n).unwrap(), via_blocks, max_relative = 1e-12);
            }
        }
        for (n, m) in [(2, 3), (4, 16), (8, 32)] {
            for lambda in [0.5, 1.0, 2.0, 3.5] {
                let via_blocks = product_moment(&MomentQuery::single(lambda, n, m).unwrap());
                assert_relative_eq!(subsystem_moment(lambda, n, m).unwrap(), via_blocks, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn single_derivative_rebuilds_the_mean() {
        for n in [2_u64, 10, 110] {
            let d = moment_derivative(DerivativeKind::Single, n, 1).unwrap();
            assert_relative_eq!(d, -mean_entropy(n).unwrap() / n as f64, max_relative = 1e-12);
        }
        for (n, m) in [(2_u64, 3_u64), (4, 16), (8, 32)] {
            assert_relative_eq!(
                mean_from_derivatives(n, m).unwrap(),
                subsystem_mean(n, m).unwrap(),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn derivative_forms_rebuild_the_variances() {
        for n in [2_u64, 10, 110] {
            let rebuilt = variance_from_derivatives(n, 1).unwrap();
            assert!((rebuilt - variance_entropy(n).unwrap()).abs() < 1e-10, "N = {n}");
        }
        for (n, m) in [(2_u64, 3_u64), (4, 16)] {
            let rebuilt = variance_from_derivatives(n, m).unwrap();
            assert!((rebuilt - subsystem_variance(n, m).unwrap()).abs() < 1e-10, "n={n} m={m}");
        }
    }

    #[test]
    fn derivative_forms_match_finite_differences() {
        let h = 1e-4;
        let (n, m) = (3_u64, 4_u64);
        let pm = |a: &[f64]| product_moment(&MomentQuery::new(a.to_vec(), m).unwrap());
        for a in [0.5, 1.0, 1.7] {
            let fd = (pm(&[a + h, 0.0, 0.0]) - pm(&[a - h, 0.0, 0.0])) / (2.0 * h);
            let exact = moment_derivative_at(DerivativeKind::Single, a, 0.0, n, m).unwrap();
            assert!((fd - exact).abs() < 1e-7, "single at {a}");

            let b = 0.8;
            let cross_fd = (pm(&[a + h, b + h, 0.0]) - pm(&[a + h, b - h, 0.0])
                - pm(&[a - h, b + h, 0.0])
                + pm(&[a - h, b - h, 0.0]))
                / (4.0 * h * h);
            let cross = moment_derivative_at(DerivativeKind::CrossBlock, a, b, n, m).unwrap();
            assert!((cross_fd - cross).abs() < 1e-6, "cross at {a}");

            // ⟨T^{a+b}⟩ as a function of (a, b)
            let s = |x: f64, y: f64| pm(&[x + y, 0.0, 0.0]);
            let same_fd = (s(a + h, b + h) - s(a + h, b - h) - s(a - h, b + h) + s(a - h, b - h))
                / (4.0 * h * h);
            let same = moment_derivative_at(DerivativeKind::SameBlock, a, b, n, m).unwrap();
            assert!((same_fd - same).abs() < 1e-6, "same at {a}");
        }
    }

    #[test]
    fn subsystem_moment_slope_is_the_mean() {
        let h = 1e-5;
        for (n, m) in [(2_u64, 3_u64), (8, 32), (4, 64)] {
            let fd = (subsystem_moment(1.0 + h, n, m).unwrap() - subsystem_moment(1.0 - h, n, m).unwrap())
                / (2.0 * h);
            let expected = -subsystem_mean(n, m).unwrap() / n as f64;
            assert!((fd - expected).abs() < 1e-8, "n={n} m={m}: {fd} vs {expected}");
        }
    }

    proptest! {
        #[test]
        fn entropy_stats_stay_in_range(dim in 1_u64..1_000_000) {
            let s = EntropyStats::of(dim).unwrap();
            prop_assert!(s.variance >= 0.0);
            prop_assert!(s.mean >= 0.0 && s.mean <= (dim as f64).ln() + 1e-12);
        }

        #[test]
        fn subsystem_mean_is_bounded(n in 1_u64..200, m in 1_u64..200) {
            let s = subsystem_mean(n, m).unwrap();
            prop_assert!(s >= -1e-15 && s <= (n as f64).ln() + 1e-12);
        }
    }
}
