use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An exact integer quantity does not fit in 64 bits.
    #[error("integer overflow: {0}")]
    Overflow(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A search or table would exceed its configured budget. The answer is
    /// unknown, never "absent".
    #[error("resource budget exceeded: {what} needs {needed}, budget is {budget}")]
    ResourceExceeded {
        what: &'static str,
        needed: u128,
        budget: u128,
    },

    /// A constructed object failed one of its own checks.
    #[error("verification failed: {0}")]
    VerificationFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn is_resource(&self) -> bool {
        matches!(self, Error::ResourceExceeded { .. })
    }
}
