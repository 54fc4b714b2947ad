//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A basis label, edge index, or node index is outside the lattice.
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    /// An operation was asked for a configuration it does not support
    /// (e.g. the edge-basis stepper on a reflective lattice).
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Invalid parameter value.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A state vector or operator would exceed the configured memory cap.
    #[error("memory cap exceeded: {needed} bytes needed, cap is {cap} bytes")]
    MemoryCap { needed: usize, cap: usize },

    /// The dense-operator dimension cap would be exceeded.
    #[error("dimension {dim} exceeds the dense-operator cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    /// A fit did not converge.
    #[error("fit did not converge: {0}")]
    FitDiverged(String),

    /// Configuration file problem; `key` names the offending entry.
    #[error("config error at `{key}`: {reason}")]
    Config { key: String, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn config(key: &str, reason: impl Into<String>) -> Self {
        Error::Config {
            key: key.to_string(),
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
