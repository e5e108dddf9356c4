//! Error type shared by the whole core crate.

use thiserror::Error;

/// Errors surfaced by construction, numerics, sampling, and certification.
#[derive(Debug, Error)]
pub enum CoreError {
    /// Shape or index mismatch (non-square input, pattern length vs modes, ...).
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// Input exceeds a documented capacity limit of an exact algorithm.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// Enumeration or memory budget exceeded; reduce cutoff or mode count.
    #[error("budget exceeded: {0}")]
    Budget(String),

    /// Parameter outside its documented domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Numerical failure (non-positive-definite matrix, non-convergence, ...).
    #[error("numerical failure: {0}")]
    Numeric(String),

    /// Malformed serialized data (CSV matrices, sample records, ...).
    #[error("parse error: {0}")]
    Parse(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, CoreError>;
