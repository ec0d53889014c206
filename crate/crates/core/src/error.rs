use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An operation was called outside its documented preconditions.
    #[error("usage error: {0}")]
    Usage(String),

    /// A semifield operation hit a value outside its domain, e.g. inverting the zero element.
    #[error("domain error: {0}")]
    Domain(String),

    /// Input data failed validation. `path` locates the offending field.
    #[error("validation error at {path}: {message}")]
    Validation { path: String, message: String },

    /// A stage or enumeration exceeded its configured size cap.
    #[error("capacity exceeded at {stage}: {count} items > cap {cap}")]
    Capacity {
        stage: String,
        count: u128,
        cap: u128,
    },

    /// The infimum is the zero element and no minimizer exists.
    #[error("infimum not attained: {0}")]
    NotAttained(String),

    /// A guarantee that exact arithmetic should make impossible was violated.
    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn validation(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
