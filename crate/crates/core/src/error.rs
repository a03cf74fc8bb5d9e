use thiserror::Error;

use crate::validation::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown semantic domain `{0}`")]
    UnknownDomain(String),

    #[error("metric configuration: {0}")]
    MetricConfig(String),

    #[error("invalid metric: {0}")]
    InvalidMetric(ValidationReport),

    #[error("invalid judgements: {0}")]
    InvalidJudgements(String),

    #[error("{operation} does not support {found} coders")]
    UnsupportedCoderCount {
        operation: &'static str,
        found: usize,
    },

    #[error("Fleiss' kappa needs the same number of raters on every item: item `{item}` has {found}, expected {expected}")]
    UnequalRaters {
        item: String,
        expected: usize,
        found: usize,
    },

    #[error("empty input")]
    EmptyInput,

    #[error("row {row}: expected {expected} cells, found {found}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("duplicate coder `{0}`")]
    DuplicateCoder(String),

    #[error("duplicate item `{0}`")]
    DuplicateItem(String),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("invalid project: {0}")]
    InvalidProject(ValidationReport),
}
