use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("negative argument: {0}")]
    NegativeArgument(i64),
    #[error("pole at evaluation point: {0}")]
    PoleAtEvaluation(String),
    #[error("more than one singular pair: {0}")]
    MultiplySingular(String),
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),
    #[error("non-realizable configuration: {0}")]
    NonRealizable(String),
    #[error("invalid module: {0}")]
    InvalidSpec(String),
}

pub type Result<T> = std::result::Result<T, Error>;
