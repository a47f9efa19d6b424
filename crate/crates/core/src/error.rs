use thiserror::Error;

use crate::report::ValidationReport;

/// Errors raised by constructions over ordered groupoids.
///
/// Axiom failures on user data come back as [`Error::Axioms`]; a failure
/// inside a construction that should be correct by theory is an
/// [`Error::InvariantBreach`] and indicates unvalidated input or a bug.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Dangling or duplicate identifiers, mismatched table sizes.
    #[error("malformed structure: {0}")]
    Structural(String),
    /// Data is well formed but violates the stated axioms.
    #[error("axiom violation: {0}")]
    Axioms(ValidationReport),
    /// An operation was called outside its precondition.
    #[error("precondition violated: {0}")]
    Domain(String),
    #[error("invariant breach: {0}")]
    InvariantBreach(String),
    #[error("search budget of {limit} partial assignments exceeded")]
    BudgetExceeded { limit: u64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn structural(msg: impl Into<String>) -> Error {
    Error::Structural(msg.into())
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn breach(msg: impl Into<String>) -> Error {
    Error::InvariantBreach(msg.into())
}
