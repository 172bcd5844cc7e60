use thiserror::Error;

/// Errors raised by construction, parsing and checker preconditions.
///
/// Semantic failures (an axiom that does not hold, a subset that is not a
/// filter) are not errors; they are reported through [`crate::report`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("structural error: {0}")]
    Structural(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("carrier size {size} exceeds the enumeration bound {bound}")]
    Capacity { size: usize, bound: usize },
    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
