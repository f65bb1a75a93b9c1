//! Crate-wide error type.  Failure is always a clean error, never a wrong
//! answer: every unsupported input path is named here.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid group: {0}")]
    Group(String),
    #[error("invalid module: {0}")]
    Module(String),
    #[error("invalid structure: {0}")]
    Structure(String),
    #[error("subgroup or module does not belong to the given parent group")]
    GroupMismatch,
    #[error("quotient has positive free rank; expected a finite group")]
    InfiniteQuotient,
    #[error("element or subgroup is not contained where required")]
    NotContained,
    #[error("unsupported cohomology degree {0}; supported degrees are -1, 0, 1, 2")]
    UnsupportedDegree(i64),
    #[error("group is not cyclic")]
    NotCyclic,
    #[error("{0}")]
    Quadratic(String),
    #[error("dataset entry '{entry}': {message}")]
    Dataset { entry: String, message: String },
    #[error("dataset file is not valid: {0}")]
    DatasetFormat(String),
    #[error("{0}")]
    Input(String),
}
