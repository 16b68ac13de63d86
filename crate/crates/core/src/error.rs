use thiserror::Error;

/// Errors produced by the ring engine and the enumerative solvers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),

    #[error("invalid rewrite rule for `{generator}`: {reason}")]
    InvalidRule { generator: String, reason: String },

    #[error("could not parse `{input}`: {reason}")]
    Parse { input: String, reason: String },

    /// An argument outside the domain of the operation.
    #[error("{0}")]
    Domain(String),

    /// The linear system for the unknown pairings is inconsistent or underdetermined.
    #[error("solver failure: {0}")]
    Solver(String),

    /// A value that must be integral (or otherwise constrained) is not.
    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn parse(input: &str, reason: impl Into<String>) -> Self {
        Error::Parse { input: input.to_string(), reason: reason.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
