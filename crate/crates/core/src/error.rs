use std::fmt;

use serde::Serialize;

/// Byte range plus 1-based line/column of its start.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{span}: {message}")]
    Parse { message: String, span: SourceSpan },
    #[error("predicate {pred} used with arity {first} and {second}")]
    ArityConflict { pred: String, first: usize, second: usize },
    #[error("rule {0} has an equality atom in its positive head")]
    EqualityInHead(String),
    #[error("rule {0} has more than one positive head atom")]
    MultiplePositiveHead(String),
    #[error("duplicate rule name {0}")]
    DuplicateRule(String),
    #[error("{0} is used both as a predicate and as a constant")]
    NameClash(String),
    #[error("unbound variable {0}")]
    Unbound(String),
    #[error("unknown predicate {0}")]
    UnknownPredicate(String),
    #[error("universe error: {0}")]
    Universe(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("program is not stratifiable: {0}")]
    NotStratifiable(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
