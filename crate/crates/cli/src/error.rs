use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// One-based line and column in the input text.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Location {
    pub line: usize,
    pub column: usize,
}

impl Location {
    pub fn from_offset(text: &str, offset: usize) -> Self {
        let before = &text[..offset.min(text.len())];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        Location { line, column }
    }
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("syntax error{}: {message}", at.map(|l| format!(" at {l}")).unwrap_or_default())]
    Syntax {
        at: Option<Location>,
        message: String,
    },
    #[error("error at {at}: {message}")]
    Semantic { at: Location, message: String },
    /// Declared structure fails its axioms or a precondition.
    #[error("{name} (line {}): {message}", at.line)]
    Invalid {
        name: String,
        at: Location,
        message: String,
    },
    #[error("{0}")]
    Missing(String),
    #[error("search budget of {limit} partial assignments exceeded")]
    Budget { limit: u64 },
    #[error("{0}")]
    Core(ogpd::Error),
}

impl From<ogpd::Error> for CliError {
    fn from(e: ogpd::Error) -> Self {
        match e {
            ogpd::Error::BudgetExceeded { limit } => CliError::Budget { limit },
            other => CliError::Core(other),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Budget { .. } => 3,
            _ => 2,
        }
    }

    pub fn status(&self) -> &'static str {
        match self {
            CliError::Budget { .. } => "budget-exceeded",
            _ => "input-error",
        }
    }
}
