use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A duplication step does not fit the string it is applied to.
    #[error("step out of bounds: {0}")]
    Bounds(String),

    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),

    /// An argument lies outside the domain where the operation is defined.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// A state or memory budget ran out before the computation finished.
    #[error("resource budget exhausted: {0}")]
    Resource(String),

    /// The single-string search ran out of states; `upper` is the length of
    /// a greedy certificate, still a valid upper bound.
    #[error("search budget exhausted after {explored} states; best upper bound {upper}")]
    SearchBudget { explored: usize, upper: usize },

    #[error("encoding error at step {step}: {reason}")]
    Encoding { step: usize, reason: String },

    #[error("decoding error at step {step}: {reason}")]
    Decoding { step: usize, reason: String },

    #[error("arithmetic overflow: {0}")]
    Overflow(String),
}

pub type Result<T> = std::result::Result<T, Error>;
