use alloc::string::String;

use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("alphabet mismatch: {left} vs {right} letters")]
    AlphabetMismatch { left: u8, right: u8 },

    /// The coefficients do not satisfy the conditions a computation relies on.
    #[error("precondition violated: {what} (residual {residual:e})")]
    Precondition { what: String, residual: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error at {position}: {message}")]
    Parse { position: usize, message: String },
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub(crate) fn parse(position: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            position,
            message: message.into(),
        }
    }
}
