use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] splitting_core::Error),

    #[error("invalid configuration: {0}")]
    Config(String),

    /// A computation ran to completion without a usable result.
    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    /// Process exit code: 1 for bad input, 2 when the input was fine but the
    /// requested property does not hold.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Infeasible(_) | Error::Verification(_) => 2,
            Error::Core(splitting_core::Error::Precondition { .. }) => 2,
            _ => 1,
        }
    }
}
