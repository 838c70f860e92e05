use thiserror::Error;

/// Which end of an admissible interval a value fell off.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    Below,
    Above,
}

impl std::fmt::Display for Bound {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Bound::Below => f.write_str("below"),
            Bound::Above => f.write_str("above"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{function}: argument {value} outside domain ({expected})")]
    Domain {
        function: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("{what}: dimension must be at least {min}, got {got}")]
    Dimension {
        what: &'static str,
        min: u64,
        got: u64,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("{what} not normalized: total {total} (tolerance {tolerance})")]
    Normalization {
        what: &'static str,
        total: f64,
        tolerance: f64,
    },

    #[error("negative probability {value} at index {index}")]
    NegativeProbability { index: usize, value: f64 },

    #[error("matrix is not {property} (max deviation {deviation:e})")]
    Matrix {
        property: &'static str,
        deviation: f64,
    },

    #[error("eigenvalue {value:e} below the positivity gate")]
    NegativeEigenvalue { value: f64 },

    #[error("target energy {energy} is {side} the attainable interval (bound {bound})")]
    EnergyOutOfRange { energy: f64, side: Bound, bound: f64 },

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
