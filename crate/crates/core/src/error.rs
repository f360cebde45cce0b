use thiserror::Error;

/// Errors raised by samplers, oracles and input parsers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Input failed a documented constraint.
    #[error("validation error: {0}")]
    Validation(String),

    /// A call violated an operation's precondition (duplicate insert, dead handle, ...).
    #[error("contract violation: {0}")]
    ContractViolation(String),

    /// The backend cannot answer this kind of query.
    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("cannot select from an empty weighted index")]
    EmptySelection,

    /// Instance exceeds the limit of an exhaustive routine.
    #[error("instance too large: {what} is {actual}, limit {limit}")]
    TooLarge {
        what: &'static str,
        actual: usize,
        limit: usize,
    },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn validation(msg: impl Into<String>) -> Error {
    Error::Validation(msg.into())
}

pub(crate) fn contract(msg: impl Into<String>) -> Error {
    Error::ContractViolation(msg.into())
}
