use thiserror::Error;

/// Failure modes shared by every layer of the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    MalformedInput(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("resource limit exceeded: {what} (cap {cap})")]
    ResourceLimit { what: String, cap: usize },
    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),
    #[error("precondition violated: {0}")]
    PreconditionViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn malformed<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::MalformedInput(msg.into()))
}

pub(crate) fn inconsistent<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InternalConsistency(msg.into()))
}
