use thiserror::Error;

use crate::report::Report;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("mismatch: {0}")]
    Mismatch(String),
    #[error("{what} fails at {witness}")]
    Witness { what: String, witness: String },
    #[error("missing operation {0}")]
    Missing(String),
    #[error("not a weak solution: residual supported on {}", .support.join(", "))]
    NotWeakSolution { support: Vec<String> },
    #[error("{context}: verification failed with {} residual(s)", .report.entries.len())]
    Verification { context: String, report: Box<Report> },
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("io error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Error {
        Error::Invalid(msg.into())
    }

    pub fn witness(what: impl Into<String>, witness: impl Into<String>) -> Error {
        Error::Witness {
            what: what.into(),
            witness: witness.into(),
        }
    }
}
