//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Precondition violated by the caller (bad argument, missing data).
    #[error("domain error: {0}")]
    Domain(String),

    /// Operation valid in principle but not supported by this build.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Size cap or similar resource guard tripped.
    #[error("resource limit: {0}")]
    Resource(String),

    /// Numerically singular or badly conditioned intermediate.
    #[error("conditioning error: {0}")]
    Conditioning(String),

    /// Dense eigen/singular solver failed to converge.
    #[error("solver error: {0}")]
    Solver(String),

    /// Expression parse failure (CLI multipliers and custom weights).
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
