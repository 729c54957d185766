use thiserror::Error;

/// Failure modes shared by every module of the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An input violates an operation's precondition.
    #[error("invalid argument: {0}")]
    Argument(String),
    /// A search or enumeration ran past its configured limit.
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    /// The input is well formed but outside the supported configurations.
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    /// An exact result failed its own certification step.
    #[error("certification failed: {0}")]
    Certification(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn arg_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Argument(msg.into()))
}
