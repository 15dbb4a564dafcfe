use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Failure modes shared by every module of the core crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Loops, duplicate edges and similar structural violations.
    MalformedInput(String),
    /// A vertex id or parameter outside its admissible range.
    OutOfRange(String),
    /// The request exceeds what an exhaustive routine is allowed to do.
    Capability(String),
    /// A documented precondition of an estimate or switching was violated.
    Contract(String),
    /// The random graph model itself is undefined (e.g. `dn` odd).
    Model(String),
    /// A rejection sampler used up its retry budget.
    RetryLimit(String),
    /// No member of a constrained graph class could be constructed.
    Construction(String),
    /// Conditioning on an empty class.
    UndefinedProbability(String),
}

impl Error {
    pub fn kind(&self) -> &'static str {
        match self {
            Error::MalformedInput(_) => "malformed input",
            Error::OutOfRange(_) => "out of range",
            Error::Capability(_) => "capability",
            Error::Contract(_) => "contract violation",
            Error::Model(_) => "model",
            Error::RetryLimit(_) => "retry limit",
            Error::Construction(_) => "construction",
            Error::UndefinedProbability(_) => "undefined probability",
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Error::MalformedInput(m)
            | Error::OutOfRange(m)
            | Error::Capability(m)
            | Error::Contract(m)
            | Error::Model(m)
            | Error::RetryLimit(m)
            | Error::Construction(m)
            | Error::UndefinedProbability(m) => m,
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} error: {}", self.kind(), self.message())
    }
}

impl core::error::Error for Error {}
