//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by lattice synthesis, measurement, training, and the
/// experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied value is outside its documented range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Statistics cannot be fitted (too few points or a zero-variance feature).
    #[error("degenerate statistics: {0}")]
    DegenerateStatistics(String),

    /// An operation was called on a model kind that does not support it.
    #[error("model kind mismatch: {0}")]
    KindMismatch(String),

    /// A query strategy was asked to select from an empty candidate pool.
    #[error("empty candidate set")]
    EmptyCandidates,

    /// CSV or config content does not match the expected schema.
    #[error("format error: {0}")]
    Format(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
