//! Log-gamma, digamma and trigamma on the positive real axis.
//!
//! All three shift the argument above [`ASYMPTOTIC_FLOOR`] with the usual
//! recurrences and then sum the Bernoulli asymptotic series. Eight series
//! terms at `x >= 10` truncate below 1e-17, so accuracy is limited by the
//! recurrence sums, not the series. Arguments up to 1e20 go straight to the
//! series.

use crate::error::{Error, Result};

/// Euler–Mascheroni constant γ.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const ASYMPTOTIC_FLOOR: f64 = 10.0;

const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_8;

// B_{2k} / (2k (2k-1)), k = 1..8
const LN_GAMMA_SERIES: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

// B_{2k} / (2k)
const DIGAMMA_SERIES: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32_760.0,
    1.0 / 12.0,
    -3617.0 / 8160.0,
];

// B_{2k}
const TRIGAMMA_SERIES: [f64; 8] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
];

/// A strictly positive real argument.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct RealArg(f64);

impl RealArg {
    pub fn new(x: f64, function: &'static str) -> Result<Self> {
        if x > 0.0 && x.is_finite() {
            Ok(Self(x))
        } else {
            Err(Error::Domain {
                function,
                value: x,
                expected: "x > 0",
            })
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// ln Γ(x) for x > 0.
pub fn log_gamma(x: f64) -> Result<f64> {
    RealArg::new(x, "log_gamma").map(|x| ln_gamma(x.get()))
}

/// Ψ(x) = Γ'(x)/Γ(x) for x > 0.
pub fn digamma(x: f64) -> Result<f64> {
    RealArg::new(x, "digamma").map(|x| psi(x.get()))
}

/// Ψ₁(x) = d² ln Γ(x)/dx² for x > 0.
pub fn trigamma(x: f64) -> Result<f64> {
    RealArg::new(x, "trigamma").map(|x| psi1(x.get()))
}

/// Evaluates `Σ coeffs[k] · t^k` by Horner's rule.
fn poly(coeffs: &[f64], t: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
}

// Unchecked kernels for callers whose arguments are >= 1 by construction.

pub(crate) fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    // (x-1)! is exact in f64 up to 18!
    if x <= 19.0 && x.fract() == 0.0 {
        let factorial: f64 = (2..x as u64).map(|k| k as f64).product();
        return factorial.ln();
    }
    let mut y = x;
    let mut shift = 1.0;
    while y < ASYMPTOTIC_FLOOR {
        shift *= y;
        y += 1.0;
    }
    let inv = 1.0 / y;
    let series = inv * poly(&LN_GAMMA_SERIES, inv * inv);
    (y - 0.5) * y.ln() - y + HALF_LN_TWO_PI + series - shift.ln()
}

/// ln Γ(x + h) − ln Γ(x) without the cancellation of two large logs.
pub(crate) fn ln_gamma_ratio(x: f64, h: f64) -> f64 {
    debug_assert!(x > 0.0 && x + h > 0.0);
    if h == 0.0 {
        return 0.0;
    }
    if x < ASYMPTOTIC_FLOOR || x + h < ASYMPTOTIC_FLOOR {
        return ln_gamma(x + h) - ln_gamma(x);
    }
    // Stirling difference: h ln x + (x + h − ½) ln(1 + h/x) − h + Δseries
    let y = x + h;
    let (ix, iy) = (1.0 / x, 1.0 / y);
    let series = iy * poly(&LN_GAMMA_SERIES, iy * iy) - ix * poly(&LN_GAMMA_SERIES, ix * ix);
    h * x.ln() + (y - 0.5) * (h / x).ln_1p() - h + series
}

pub(crate) fn psi(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    let mut y = x;
    let mut shift = 0.0;
    while y < ASYMPTOTIC_FLOOR {
        shift += 1.0 / y;
        y += 1.0;
    }
    let inv2 = 1.0 / (y * y);
    y.ln() - 0.5 / y - inv2 * poly(&DIGAMMA_SERIES, inv2) - shift
}

pub(crate) fn psi1(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    let mut y = x;
    let mut shift = 0.0;
    while y < ASYMPTOTIC_FLOOR {
        shift += 1.0 / (y * y);
        y += 1.0;
    }
    let inv = 1.0 / y;
    let inv2 = inv * inv;
    inv + 0.5 * inv2 + inv * inv2 * poly(&TRIGAMMA_SERIES, inv2) + shift
}
