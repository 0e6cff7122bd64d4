use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("population size must be at least 2, got {0}")]
    PopulationTooSmall(usize),

    #[error("problem dimension must be at least 1")]
    EmptyDimension,

    #[error("parents have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),

    #[error("averaged amplitude {0} lies outside [-1, 1]")]
    AmplitudeOutOfRange(f64),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid knapsack instance: {0}")]
    Validation(String),

    #[error("{path}:{line}: {message}")]
    Parse { path: PathBuf, line: usize, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub(crate) fn csv(path: impl Into<PathBuf>, source: csv::Error) -> Self {
        Error::Csv { path: path.into(), source }
    }

    /// True for errors caused by bad user input rather than the environment.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::PopulationTooSmall(_)
                | Error::EmptyDimension
                | Error::Config(_)
                | Error::Validation(_)
                | Error::Parse { .. }
        )
    }
}
