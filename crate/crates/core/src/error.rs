use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Which cohort of a train/test split ran out of a class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cohort {
    Train,
    Test,
}

impl std::fmt::Display for Cohort {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Cohort::Train => f.write_str("train"),
            Cohort::Test => f.write_str("test"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("out of range: {0}")]
    Range(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("{cohort} cohort has {count} trajectories of class {class}; resample needed")]
    ResampleNeeded { cohort: Cohort, class: u8, count: usize },

    #[error("invalid model: {0}")]
    Spec(String),

    #[error("class error: {0}")]
    Class(String),

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("usage: {0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }

    /// Wraps an I/O failure with the path it concerns.
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code: 1 usage, 2 data, 3 numeric.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) | Error::Spec(_) => 1,
            Error::Parse { .. } | Error::Class(_) | Error::Io { .. } | Error::NonFinite(_) => 2,
            Error::Dimension(_)
            | Error::Range(_)
            | Error::Domain(_)
            | Error::InsufficientData(_)
            | Error::Grid(_)
            | Error::ResampleNeeded { .. } => 3,
        }
    }
}
