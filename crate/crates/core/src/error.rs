use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed CSV in {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("row {row}: expected {expected} columns, found {found}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("row {row}, column {column}: non-numeric value {value:?}")]
    NonNumeric {
        row: usize,
        column: usize,
        value: String,
    },

    #[error("row {row}, column {column}: missing value")]
    MissingValue { row: usize, column: usize },

    #[error("dataset needs at least one feature column and a label column, found {0} columns")]
    TooFewColumns(usize),

    #[error("dataset needs at least 2 distinct classes, found {0}")]
    TooFewClasses(usize),

    #[error("cannot split {instances} instances into {folds} folds")]
    InvalidFoldCount { folds: usize, instances: usize },

    #[error("invalid mask bitstring {0:?}")]
    InvalidMask(String),

    #[error("feature mask selects no features")]
    EmptyMask,

    #[error("training set is empty")]
    EmptyTrainingSet,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("transfer function input must be finite, got {0}")]
    NonFinite(f64),

    #[error("transfer function {id} is not {expected}-shaped")]
    WrongFamily { id: String, expected: &'static str },

    #[error("iteration {t} outside 1..={max}")]
    IterationOutOfRange { t: usize, max: usize },

    #[error("shrink ratio must be >= 1, got {0}")]
    InvalidRatio(f64),

    #[error("cannot select from an empty fitness vector")]
    EmptySelection,

    #[error("exhaustive search supports at most {max} features, dataset has {found}")]
    TooManyFeatures { found: usize, max: usize },

    #[error("unknown transfer function {0:?}")]
    UnknownTransfer(String),

    #[error("unknown algorithm {0:?}")]
    UnknownAlgorithm(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("cannot parse {path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("report table is empty")]
    EmptyReport,
}

impl Error {
    /// True for failures caused by dataset content or dataset files, as opposed
    /// to configuration mistakes.
    pub fn is_dataset_error(&self) -> bool {
        matches!(
            self,
            Error::Io { .. }
                | Error::Csv { .. }
                | Error::RaggedRow { .. }
                | Error::NonNumeric { .. }
                | Error::MissingValue { .. }
                | Error::TooFewColumns(_)
                | Error::TooFewClasses(_)
                | Error::InvalidFoldCount { .. }
                | Error::TooManyFeatures { .. }
        )
    }
}
