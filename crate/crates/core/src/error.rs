use thiserror::Error;

use crate::dsl::ParseError;
use crate::engine::SpecError;

/// A value failed a check. Carries the full assertion message.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{message}")]
pub struct ValidationError {
    message: String,
}

impl ValidationError {
    /// Builds the assertion message `Assertion on '<label>' failed: <failure>`.
    pub fn new(label: &str, failure: &str) -> Self {
        ValidationError {
            message: format!("Assertion on '{label}' failed: {failure}"),
        }
    }

    pub fn message(&self) -> &str {
        &self.message
    }
}

/// The caller supplied a malformed rule or spec.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum UsageError {
    #[error("invalid rule: {0}")]
    Rule(#[from] ParseError),
    #[error("invalid spec: {0}")]
    Spec(#[from] SpecError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Validation(#[from] ValidationError),
    #[error(transparent)]
    Usage(#[from] UsageError),
}

impl From<ParseError> for Error {
    fn from(e: ParseError) -> Self {
        Error::Usage(e.into())
    }
}

impl From<SpecError> for Error {
    fn from(e: SpecError) -> Self {
        Error::Usage(e.into())
    }
}
