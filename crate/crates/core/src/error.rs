use thiserror::Error;

use crate::context::Sort;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("unknown id `{0}`")]
    UnknownId(String),

    #[error("sort mismatch: expected {expected}, found {found}")]
    SortMismatch { expected: Sort, found: Sort },

    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("sort error in `{term}`: {message}")]
    IllSorted { term: String, message: String },

    #[error("budget exceeded: 2^{bits} valuations needed, cap is {cap}")]
    BudgetExceeded { bits: u32, cap: u64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("line {line}: {message}")]
    Line { line: usize, message: String },

    #[error("io: {0}")]
    Io(String),
}

impl Error {
    /// Short machine-readable tag, used in the CLI's error JSON.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Malformed(_) => "malformed",
            Error::UnknownId(_) => "unknown_id",
            Error::SortMismatch { .. } => "sort_mismatch",
            Error::Syntax { .. } => "syntax",
            Error::IllSorted { .. } => "ill_sorted",
            Error::BudgetExceeded { .. } => "budget_exceeded",
            Error::Unsupported(_) => "unsupported",
            Error::OutOfRange(_) => "out_of_range",
            Error::Line { .. } => "line",
            Error::Io(_) => "io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
