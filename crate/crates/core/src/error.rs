use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed or out-of-range input.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An operation was called outside its documented domain.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Collinear or otherwise degenerate point sets.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    /// A proven mathematical invariant failed to hold. Either the input
    /// escaped validation or a theorem the code relies on is contradicted.
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
}

impl Error {
    pub fn is_invariant_violation(&self) -> bool {
        matches!(self, Error::InvariantViolation(_))
    }

    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::InvariantViolation(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
