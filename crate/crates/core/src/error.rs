use std::io;
use thiserror::Error;

/// Errors produced by the library operations.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside its documented range.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A documented precondition of an operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A time step was rejected by the CFL guard.
    #[error("CFL violation: dt = {dt:e} exceeds limit {limit:e} at max |u| = {max_u:e}")]
    CflViolation { dt: f64, limit: f64, max_u: f64 },

    /// Internal consistency failure that should be impossible for valid inputs.
    #[error("consistency error: {0}")]
    Consistency(String),

    /// A file could not be read or written.
    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },

    /// A file exists but its contents are not in the expected format.
    #[error("malformed file {path}: {reason}")]
    Format { path: String, reason: String },
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub fn io(path: impl Into<String>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn format(path: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Format {
            path: path.into(),
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
