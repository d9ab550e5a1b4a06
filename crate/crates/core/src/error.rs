use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("sector too large: dimension {dim} exceeds the limit {limit}")]
    SectorTooLarge { dim: u128, limit: usize },

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("value {value} is not an eigenvalue (residual {residual:e} > {threshold:e})")]
    NotAnEigenvalue {
        value: f64,
        residual: f64,
        threshold: f64,
    },

    #[error("overflow: {0}")]
    Overflow(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
