use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("jet degree {0} not supported")]
    Degree(usize),
    #[error("jet order exhausted by repeated differentiation")]
    JetOrderExhausted,
    #[error("form degree overflow: {0} + {1} > 4")]
    FormDegree(usize, usize),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("precondition violated ({condition}): {detail}")]
    Precondition { condition: String, detail: String },
    #[error("Y operator singular at the base point (det = {det:.3e})")]
    SingularY { det: f64 },
    #[error("inner product is not positive definite")]
    IndefiniteMetric,
    #[error("non-finite sample at {0}")]
    NonFinite(String),
}

pub type Result<T> = std::result::Result<T, Error>;
