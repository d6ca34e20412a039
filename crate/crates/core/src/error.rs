use thiserror::Error;

use crate::hypfill::ReductionTrace;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An unsupported or inconsistent configuration (ring spec, preset, flag value).
    #[error("configuration error: {0}")]
    Config(String),
    /// An operation was called outside of its precondition.
    #[error("contract violation: {0}")]
    Contract(String),
    /// A fit or check was asked to work with too few data points.
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    /// A cycle sits too close to the boundary of a truncated complex.
    #[error("truncation margin violated: {0}")]
    Margin(String),
    /// A search ran out of nodes or time before producing any answer.
    #[error("budget exhausted: {0}")]
    Budget(String),
    /// A certified construction could not be carried out; the partial trace is attached when there is one.
    #[error("certification failure: {message}")]
    Certification {
        message: String,
        trace: Option<Box<ReductionTrace>>,
    },
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, message: msg.into() }
    }
}
