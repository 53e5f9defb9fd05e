use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),

    #[error("corrupt input: {malformed} of {total} records malformed")]
    CorruptInput { malformed: usize, total: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("empty corpus")]
    EmptyCorpus,

    #[error("training labels contain a single class")]
    SingleClass,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("cannot stratify: class {class} has {count} samples, need at least {k}")]
    Stratification { class: u8, count: usize, k: usize },

    #[error("kappa undefined: all ratings fall in a single category")]
    KappaUndefined,

    #[error("model invariant violated: {0}")]
    Invariant(String),

    #[error("missing criterion {0}")]
    MissingCriterion(usize),

    #[error("document is empty after cleaning")]
    EmptyDocument,

    #[error("unknown graph format: {0}")]
    UnknownFormat(String),
}
