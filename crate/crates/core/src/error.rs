use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed input; `path` names the offending field.
    #[error("input error at {path}: {message}")]
    Input { path: String, message: String },
    /// A structure is larger than the oracle may handle.
    #[error("size {size} exceeds the cap of {cap} elements")]
    Cap { size: usize, cap: usize },
    /// An operation was called outside its contract.
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// The request is well formed but not something this library computes.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// Back-and-forth found no isomorphism; `prefix` is the last verified partial map.
    #[error("no isomorphism extends the prefix {prefix:?}")]
    NoIsomorphism { prefix: Vec<(usize, usize)> },
}

impl Error {
    pub fn input(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Input {
            path: path.into(),
            message: message.into(),
        }
    }

    /// Short machine-readable tag for the error class.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Input { .. } => "input",
            Error::Cap { .. } => "cap",
            Error::Precondition(_) => "precondition",
            Error::Unsupported(_) => "unsupported",
            Error::NoIsomorphism { .. } => "no-isomorphism",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
