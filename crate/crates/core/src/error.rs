use thiserror::Error;

use crate::circuit::ParseError;

/// Errors raised by state construction, circuit compilation and graph extraction.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("covariance matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("position covariance block is singular or ill-conditioned (rcond {rcond:e})")]
    Singular { rcond: f64 },

    #[error("wiring error in element {element}: {message}")]
    Wiring { element: String, message: String },

    #[error(transparent)]
    Parse(#[from] ParseError),
}

pub type Result<T> = std::result::Result<T, Error>;
