use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    /// A record-level problem, reported with the record and the offending field.
    #[error("video `{video_id}`, field `{field}`: {message}")]
    Record {
        video_id: String,
        field: String,
        message: String,
    },

    #[error("manifest: {0}")]
    Manifest(String),

    #[error("config: {0}")]
    Config(String),

    #[error("trajectory too short: {len} points, need at least {min}")]
    TooShort { len: usize, min: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("need at least {min} vectors for moment estimation, got {actual}")]
    TooFewVectors { min: usize, actual: usize },

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("symmetric eigensolver did not converge")]
    NoConvergence,

    #[error("zero-norm feature vector at position {0}")]
    ZeroNorm(usize),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("no videos")]
    NoVideos,

    #[error("nothing to report")]
    NothingToReport,

    #[error("missing value for model `{model}`, metric `{metric}`")]
    MissingValue { model: String, metric: String },

    #[error("validation failed with {0} error(s)")]
    Validation(usize),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn record(
        video_id: impl Into<String>,
        field: impl Into<String>,
        message: impl std::fmt::Display,
    ) -> Self {
        Error::Record {
            video_id: video_id.into(),
            field: field.into(),
            message: message.to_string(),
        }
    }
}
