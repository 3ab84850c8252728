use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library can report.
#[derive(Debug, Error)]
pub enum Error {
    #[error("series too short: need at least {required} points, got {actual}")]
    SeriesTooShort { required: usize, actual: usize },

    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    #[error("label count {labels} does not match value count {values}")]
    LabelLength { values: usize, labels: usize },

    #[error("normalized difference undefined at index {index}: y[i] + y[i-1] == 0")]
    DegenerateDifference { index: usize },

    #[error("input has {actual} components, expected {expected}")]
    InputDimension { expected: usize, actual: usize },

    #[error("empty dataset")]
    EmptyDataset,

    #[error("parameter vector has length {actual}, expected {expected}")]
    ShapeMismatch { expected: usize, actual: usize },

    #[error("need at least {required} patterns for training, got {actual}")]
    TooFewPatterns { required: usize, actual: usize },

    #[error("Hénon orbit escaped {restarts} times in a row")]
    GeneratorDivergence { restarts: usize },

    #[error("test set is degenerate: {0}")]
    DegenerateTestSet(&'static str),

    #[error("correlation undefined: zero variance")]
    DegenerateCorrelation,

    #[error("samples are degenerate: {0}")]
    DegenerateSamples(&'static str),

    #[error("event set contains points without a ground-truth label")]
    MissingLabels,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{path}:{line}: {message}")]
    Csv {
        path: String,
        line: u64,
        message: String,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("fold {fold}: {source}")]
    Fold {
        fold: usize,
        #[source]
        source: Box<Error>,
    },
}

/// Coarse classification used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Usage,
    Data,
    Numeric,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::InvalidArgument(_) | Error::Config(_) | Error::Json(_) => ErrorClass::Usage,
            Error::SeriesTooShort { .. }
            | Error::NonFinite { .. }
            | Error::LabelLength { .. }
            | Error::DegenerateDifference { .. }
            | Error::Csv { .. }
            | Error::Io { .. }
            | Error::MissingLabels
            | Error::EmptyDataset
            | Error::TooFewPatterns { .. } => ErrorClass::Data,
            Error::InputDimension { .. }
            | Error::ShapeMismatch { .. }
            | Error::GeneratorDivergence { .. }
            | Error::DegenerateTestSet(_)
            | Error::DegenerateCorrelation
            | Error::DegenerateSamples(_) => ErrorClass::Numeric,
            Error::Fold { source, .. } => source.class(),
        }
    }

    /// Exit status for the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self.class() {
            ErrorClass::Usage => 1,
            ErrorClass::Data => 2,
            ErrorClass::Numeric => 3,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
