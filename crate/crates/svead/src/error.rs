//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by dataset construction, ingestion, configuration and
/// evaluation. CSV errors report 1-based row/column positions counted over
/// data rows (a header row, when present, is not counted).
#[derive(Debug, Error)]
pub enum Error {
    #[error("dataset must contain at least one row and one feature")]
    EmptyDataset,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("feature matrix length {got} is not a multiple of the declared width {width}")]
    ShapeMismatch { got: usize, width: usize },

    #[error("feature at row {row}, column {col} is not finite")]
    NonFiniteFeature { row: usize, col: usize },

    #[error("label vector has length {got}, expected {expected}")]
    LabelLength { expected: usize, got: usize },

    #[error("label at row {row} is {value}, expected 0 or 1")]
    InvalidLabel { row: usize, value: u8 },

    #[error("{path}: no data rows")]
    CsvEmpty { path: String },

    #[error("{path}: row {row} has {got} columns, expected {expected}")]
    CsvRaggedRow {
        path: String,
        row: usize,
        expected: usize,
        got: usize,
    },

    #[error("{path}: row {row}, column {col}: cannot parse {value:?} as a number")]
    CsvNonNumeric {
        path: String,
        row: usize,
        col: usize,
        value: String,
    },

    #[error("{path}: row {row}, column {col}: value is not finite")]
    CsvNonFinite {
        path: String,
        row: usize,
        col: usize,
    },

    #[error("{path}: row {row}: label must be 0 or 1, got {value:?}")]
    CsvNonBinaryLabel {
        path: String,
        row: usize,
        value: String,
    },

    #[error("dataset {name:?} has no labels, but the operation requires them")]
    MissingLabels { name: String },

    #[error("metric undefined: {0}")]
    UndefinedMetric(String),

    #[error("length mismatch: {0}")]
    LengthMismatch(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
