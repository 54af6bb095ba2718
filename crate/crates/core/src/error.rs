use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the modeling pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("InvalidParameter: {0}")]
    InvalidParameter(String),

    #[error("EmptyDataset: at least one sample is required")]
    EmptyDataset,

    #[error("InvalidGrid: {0}")]
    InvalidGrid(String),

    #[error("InvalidSchedule: {0}")]
    InvalidSchedule(String),

    #[error("ShapeMismatch: {left} values vs {right} values")]
    ShapeMismatch { left: usize, right: usize },

    #[error("DegenerateVariance: Var(y) + Var(y_p) is zero")]
    DegenerateVariance,

    #[error("OutOfDomain: {0} is outside [-1, 1]")]
    OutOfDomain(f64),

    #[error("MalformedCsv: {path}: {reason}")]
    MalformedCsv { path: PathBuf, reason: String },

    #[error("NumericalFailure: {0}")]
    Numerical(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True when the error stems from user input or configuration rather than
    /// from a numerical breakdown. The CLI maps these to exit code 2.
    pub fn is_invalid_input(&self) -> bool {
        !matches!(self, Error::Numerical(_))
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
