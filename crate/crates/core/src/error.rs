use thiserror::Error;

use crate::layout::ValidationReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("structural error: {0}")]
    Structure(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("page {page} out of range for {ell} pages")]
    PageOutOfRange { page: usize, ell: usize },

    #[error("layout is not a valid queue layout ({} nesting pairs)", .0.violations.len())]
    InvalidLayout(ValidationReport),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("parse error at `{key}`: {message}")]
    Parse { key: String, message: String },

    #[error("search budget of {0} steps exhausted")]
    BudgetExhausted(u64),

    #[error("generation failed: {0}")]
    Generation(String),

    #[error("internal consistency error: {0}")]
    Internal(String),
}

impl Error {
    pub fn parse(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            key: key.into(),
            message: message.into(),
        }
    }
}
