use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument violated an operation's documented preconditions.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// A caller contract was broken (e.g. unevaluated individuals, non-positive
    /// fitness where strictly positive values are required).
    #[error("contract violation: {0}")]
    Contract(String),
    /// A configuration value or combination of values is not usable.
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    /// Text input could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
    /// Population initialization could not produce the required individuals.
    #[error("initialization failed: {0}")]
    InitFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;
