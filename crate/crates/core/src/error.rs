use thiserror::Error;

/// Errors raised by the certification routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Malformed arguments: bad index, wrong length, mismatched dimensions.
    #[error("invalid input: {0}")]
    Input(String),

    /// The request exceeds the configured qubit cap.
    #[error("qubit count {requested} exceeds the supported maximum of {max}")]
    Resource { requested: usize, max: usize },

    /// The input is well formed but violates an operation's precondition.
    #[error("contract violation: {0}")]
    Contract(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}
