use std::path::PathBuf;

use thiserror::Error;

/// Errors raised anywhere in the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("empty input: {0}")]
    Empty(String),

    #[error("missing column {0:?} in header")]
    MissingColumn(String),

    #[error("unexpected column {0:?} in header")]
    UnexpectedColumn(String),

    #[error("cannot parse {value:?} at row {row}, column {column:?}")]
    Parse {
        row: usize,
        column: String,
        value: String,
    },

    #[error("malformed timestamp {value:?} at row {row}")]
    Timestamp { row: usize, value: String },

    #[error("unknown column {0:?}")]
    UnknownColumn(String),

    #[error("no active rows")]
    NoActiveRows,

    #[error("column {0:?} is constant; correlation undefined")]
    ConstantColumn(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("schema mismatch: model expects {expected} features, got {got}")]
    SchemaMismatch { expected: usize, got: usize },

    #[error("design matrix is rank deficient and ridge fallback is disabled")]
    RankDeficient,

    #[error("unknown hyper-parameter {name:?} for {family}")]
    UnknownHyperparam { family: String, name: String },

    #[error("hyper-parameter {name} = {value} outside [{lower}, {upper}]")]
    OutOfBounds {
        name: String,
        value: f64,
        lower: f64,
        upper: f64,
    },

    #[error("provenance mismatch: {0}")]
    Provenance(String),

    #[error("stage {stage} failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Wraps the error with the name of the pipeline stage that produced it.
    pub fn in_stage(self, stage: &'static str) -> Self {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
