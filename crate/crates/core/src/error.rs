use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error at row {row}, column {column}: {message}")]
    Parse {
        row: usize,
        column: usize,
        message: String,
    },

    #[error("missing value at row {row}, column {column}")]
    MissingValue { row: usize, column: usize },

    #[error("non-numeric feature value {value:?} at row {row}, column {column}")]
    NonNumeric {
        row: usize,
        column: usize,
        value: String,
    },

    #[error("empty input: {0}")]
    Empty(String),

    #[error("label column {0:?} not found")]
    LabelColumn(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("training set must contain both classes")]
    SingleClass,

    #[error("non-finite value in input")]
    NonFinite,

    #[error("label multisets of the partition do not match the parent")]
    MultisetMismatch,

    #[error("unsupported model schema version {found} (supported: {supported})")]
    SchemaMismatch { found: u64, supported: u64 },

    #[error("corrupted model payload: {0}")]
    Corrupted(String),

    #[error("invalid shape: {0}")]
    Shape(String),
}

pub type Result<T> = std::result::Result<T, Error>;
