use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("unsupported domain: {0}")]
    UnsupportedDomain(String),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("certification refused: {0}")]
    RatioViolated(String),
    #[error("certification failed: {0}")]
    CertificationFailed(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
}

pub type Result<T> = std::result::Result<T, Error>;
