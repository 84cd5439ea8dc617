use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A documented precondition of an operation does not hold for its input.
    #[error("contract violation: {0}")]
    ContractViolation(String),

    /// Channel parameters rejected at construction. `field` names the offending entry.
    #[error("validation failed for `{field}`: {message}")]
    Validation { field: String, message: String },

    #[error("unsupported parameters: {0}")]
    Unsupported(String),

    /// A value that validated inputs can never produce; signals a bug upstream.
    #[error("internal consistency: {0}")]
    InternalConsistency(String),
}

impl Error {
    pub(crate) fn validation(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            message: message.into(),
        }
    }
}
