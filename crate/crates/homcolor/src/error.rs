use thiserror::Error;

use crate::report::SuiteReport;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("cannot parse scalar `{text}` at offset {offset}: {message}")]
    Parse {
        text: String,
        offset: usize,
        message: String,
    },
    #[error("invalid symbol name `{0}`")]
    BadName(String),
    #[error("invalid radicand: {0}")]
    BadRadicand(String),
    #[error("mismatched scalar contexts: {0}")]
    ContextMismatch(String),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("grading: {0}")]
    Grading(String),
    #[error("{field}: {message}")]
    Format { field: String, message: String },
    #[error("invalid presentation: {0}")]
    Invalid(String),
    #[error("unknown role `{0}`")]
    MissingRole(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("precondition failed: {reason}")]
    Precondition {
        reason: String,
        report: Box<SuiteReport>,
    },
}

impl Error {
    pub(crate) fn format(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Format {
            field: field.into(),
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
