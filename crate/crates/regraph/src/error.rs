use std::path::PathBuf;

use regraph_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Parse { path: PathBuf, line: usize, message: String },
    #[error("bad configuration: {0}")]
    Config(String),
    #[error("report encoding: {0}")]
    Encoding(String),
}

pub type HarnessResult<T> = Result<T, HarnessError>;

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const FAILURE: i32 = 1;
    pub const GATE_FAILURE: i32 = 2;
    pub const CAPABILITY: i32 = 3;
    pub const BAD_INPUT: i32 = 4;
}

impl HarnessError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        HarnessError::Io { path: path.into(), source }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Core(e) => match e {
                CoreError::Capability(_) | CoreError::RetryLimit(_) => exit::CAPABILITY,
                CoreError::MalformedInput(_)
                | CoreError::OutOfRange(_)
                | CoreError::Contract(_)
                | CoreError::Model(_)
                | CoreError::Construction(_)
                | CoreError::UndefinedProbability(_) => exit::BAD_INPUT,
            },
            HarnessError::Parse { .. } | HarnessError::Config(_) => exit::BAD_INPUT,
            HarnessError::Io { .. } | HarnessError::Encoding(_) => exit::FAILURE,
        }
    }
}
