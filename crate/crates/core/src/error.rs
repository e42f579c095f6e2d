use std::path::PathBuf;

use thiserror::Error;

/// Errors raised anywhere in the analysis pipeline.
#[derive(Debug, Error)]
pub enum Error {
    /// A configuration value violates its documented range.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// A filter design produced coefficients that cannot be run safely.
    #[error("filter design failed: {0}")]
    Design(String),

    /// An API was called with inputs that do not fit together.
    #[error("usage error: {0}")]
    Usage(String),

    /// A statistic is undefined for the given input (e.g. zero variance).
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// Input data is malformed or inconsistent.
    #[error("data error: {0}")]
    Data(String),

    /// A file could not be parsed; `line` is 1-based.
    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    /// Feature outputs differed between thread counts.
    #[error("determinism check failed: {0}")]
    Nondeterministic(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
