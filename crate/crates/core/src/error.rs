use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    /// QL sweep hit the iteration cap; the partial result is discarded
    /// rather than returned silently.
    #[error("eigensolver failed to converge at eigenvalue index {index} after {iterations} sweeps{context}")]
    Convergence {
        index: usize,
        iterations: usize,
        context: String,
    },

    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl Error {
    /// Attach ensemble/sweep context (realization index, grid point) to a
    /// convergence failure as it propagates up.
    pub fn with_context(self, extra: &str) -> Self {
        match self {
            Error::Convergence {
                index,
                iterations,
                context,
            } => Error::Convergence {
                index,
                iterations,
                context: format!("{context} [{extra}]"),
            },
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
