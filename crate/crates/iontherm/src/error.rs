use std::io;

use thiserror::Error;

/// Error type shared across the library.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument violated a documented precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A configured resource cap (polynomial degree, phonon index, ...) was
    /// exceeded.
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    /// A file does not match its declared binary or CSV layout. `field`
    /// names the first offending element.
    #[error("format error at {field}: {detail}")]
    Format { field: String, detail: String },

    /// A model and an input disagree on the number of sidebands.
    #[error("sideband count mismatch: model expects Q={expected}, input has Q={actual}")]
    QMismatch { expected: usize, actual: usize },

    /// A nonlinear fit hit its iteration cap without converging.
    #[error("fit did not converge after {iterations} iterations (last residual norm {residual:.3e})")]
    FitFailure { iterations: usize, residual: f64 },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn format(field: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Format {
            field: field.into(),
            detail: detail.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
