use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("column for unit {unit} has zero variance in the training data")]
    DegenerateColumn { unit: String },

    #[error("model keeps all {n} components, leaving no residual subspace")]
    NoResidualSpace { n: usize },

    #[error("residual eigenvalues are all zero, control threshold is undefined")]
    DegenerateThreshold,

    #[error("model mismatch: {0}")]
    ModelMismatch(String),

    #[error("calibration failed for unit {unit}: {reason}")]
    CalibrationFailed { unit: String, reason: String },

    #[error("reference amplitude is zero, relative error undefined")]
    UndefinedError,

    #[error("current estimate needs at least one included unit")]
    EmptyInclusion,

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error("config: {0}")]
    Config(String),

    #[error("stage `{stage}` failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
