//! Logistic ("Fermi–Dirac-like") model for the distribution of the
//! normalized entropy `s = S / ln N`, and goodness of fit against samples.
//!
//! The model CDF is `1 / (1 + exp[−c_N (s − μ_N / ln N)])` with
//! `μ_N = Ψ(N+1) − Ψ(2)` and `c_N = μ_N √(π² N / (π² − 9))`. It is supported
//! on the whole line; this module evaluates it on `[0, 1]` without
//! renormalizing. For `N ≥ 110` the mass outside `[0, 1]` is below 1e-6.

use std::f64::consts::PI;

use serde::Serialize;

use crate::analytic::mean_entropy;
use crate::error::{Error, Result};

/// Parameters of the logistic entropy model for dimension `dim`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FdParams {
    /// `μ_N` in nats.
    pub mu: f64,
    /// Logistic steepness `c_N` in units of `1/s`.
    pub c: f64,
    pub dim: u64,
}

pub fn fd_params(dim: u64) -> Result<FdParams> {
    if dim < 2 {
        return Err(Error::Dimension {
            what: "fit dimension",
            min: 2,
            got: dim,
        });
    }
    let mu = mean_entropy(dim)?;
    let c = mu * (PI * PI * dim as f64 / (PI * PI - 9.0)).sqrt();
    Ok(FdParams { mu, c, dim })
}

impl FdParams {
    /// `μ_N / ln N`, where the CDF crosses 1/2.
    pub fn midpoint(&self) -> f64 {
        self.mu / (self.dim as f64).ln()
    }

    pub fn cdf(&self, s: f64) -> f64 {
        let x = self.c * (s - self.midpoint());
        if x >= 0.0 {
            1.0 / (1.0 + (-x).exp())
        } else {
            let e = x.exp();
            e / (1.0 + e)
        }
    }

    pub fn pdf(&self, s: f64) -> f64 {
        let e = (-(self.c * (s - self.midpoint())).abs()).exp();
        self.c * e / ((1.0 + e) * (1.0 + e))
    }

    /// Inverse of [`Self::cdf`] on `(0, 1)`.
    pub fn quantile(&self, u: f64) -> f64 {
        self.midpoint() + (u / (1.0 - u)).ln() / self.c
    }

    /// Variance of the untruncated logistic law in `s` units, `π²/(3c²)`.
    pub fn logistic_variance(&self) -> f64 {
        PI * PI / (3.0 * self.c * self.c)
    }
}

pub fn fd_cdf(s: f64, params: &FdParams) -> f64 {
    params.cdf(s)
}

pub fn fd_pdf(s: f64, params: &FdParams) -> f64 {
    params.pdf(s)
}

/// Sorted normalized entropies.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCdf {
    sorted: Vec<f64>,
}

impl EmpiricalCdf {
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if let Some(&bad) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::Domain {
                function: "EmpiricalCdf",
                value: bad,
                expected: "0 <= s <= 1",
            });
        }
        values.sort_by(f64::total_cmp);
        Ok(Self { sorted: values })
    }

    /// Normalizes raw entropies (nats) by `ln dim`.
    pub fn from_entropies(entropies: &[f64], dim: u64) -> Result<Self> {
        if dim < 2 {
            return Err(Error::Dimension {
                what: "fit dimension",
                min: 2,
                got: dim,
            });
        }
        let ln_dim = (dim as f64).ln();
        Self::new(entropies.iter().map(|s| (s / ln_dim).clamp(0.0, 1.0)).collect())
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.sorted
    }

    /// Fraction of samples `<= s`.
    pub fn eval(&self, s: f64) -> f64 {
        let count = self.sorted.partition_point(|&v| v <= s);
        count as f64 / self.sorted.len() as f64
    }

    fn require_samples(&self) -> Result<()> {
        if self.sorted.is_empty() {
            Err(Error::Dimension {
                what: "sample set",
                min: 1,
                got: 0,
            })
        } else {
            Ok(())
        }
    }
}

/// Kolmogorov–Smirnov statistic `sup_s |F_M(s) − Pr(s)|`. Meaningful for
/// `M ≳ 100`; only an empty sample is rejected.
pub fn ks_distance(samples: &EmpiricalCdf, params: &FdParams) -> Result<f64> {
    samples.require_samples()?;
    let m = samples.len() as f64;
    Ok(samples
        .sorted
        .iter()
        .enumerate()
        .map(|(i, &s)| {
            let f = params.cdf(s);
            ((i + 1) as f64 / m - f).max(f - i as f64 / m)
        })
        .fold(0.0, f64::max))
}

/// Bin edges by the Freedman–Diaconis rule, width `2·IQR·M^{−1/3}`.
pub fn freedman_diaconis_edges(sorted: &[f64]) -> Vec<f64> {
    let (lo, hi) = match (sorted.first(), sorted.last()) {
        (Some(&lo), Some(&hi)) if hi > lo => (lo, hi),
        (Some(&lo), _) => return vec![lo, lo],
        _ => return Vec::new(),
    };
    let q = |p: f64| sorted[((sorted.len() - 1) as f64 * p).round() as usize];
    let iqr = q(0.75) - q(0.25);
    let width = 2.0 * iqr / (sorted.len() as f64).cbrt();
    let bins = if width > 0.0 {
        (((hi - lo) / width).ceil() as usize).clamp(1, 1000)
    } else {
        1
    };
    let step = (hi - lo) / bins as f64;
    (0..=bins).map(|k| lo + step * k as f64).collect()
}

/// Pearson χ² of binned samples against the model.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChiSquare {
    pub statistic: f64,
    pub bins: usize,
    pub dof: usize,
}

/// χ² over Freedman–Diaconis bins; the outermost bins extend to 0 and 1,
/// and adjacent bins are merged until each expects at least 5 counts.
pub fn chi_square(samples: &EmpiricalCdf, params: &FdParams) -> Result<ChiSquare> {
    samples.require_samples()?;
    let m = samples.len() as f64;
    let mut edges = freedman_diaconis_edges(&samples.sorted);
    let last = edges.len() - 1;
    edges[0] = 0.0;
    edges[last] = 1.0;

    let mut cells: Vec<(f64, f64)> = Vec::new(); // (observed, expected)
    let (mut obs, mut exp) = (0.0, 0.0);
    for w in edges.windows(2) {
        obs += (samples.eval(w[1]) - samples.eval(w[0])) * m;
        if w[0] == 0.0 {
            obs += samples.sorted.iter().take_while(|&&v| v <= 0.0).count() as f64;
        }
        exp += (params.cdf(w[1]) - params.cdf(w[0])) * m;
        if exp >= 5.0 {
            cells.push((obs, exp));
            obs = 0.0;
            exp = 0.0;
        }
    }
    if obs > 0.0 || exp > 0.0 {
        match cells.last_mut() {
            Some(cell) => {
                cell.0 += obs;
                cell.1 += exp;
            }
            None => cells.push((obs, exp)),
        }
    }
    let statistic = cells
        .iter()
        .filter(|(_, e)| *e > 0.0)
        .map(|(o, e)| (o - e) * (o - e) / e)
        .sum();
    Ok(ChiSquare {
        statistic,
        bins: cells.len(),
        dof: cells.len().saturating_sub(1),
    })
}
