use thiserror::Error;

/// Errors shared by every layer of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter error: {0}")]
    Param(String),
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("order error: {0}")]
    Order(String),
    #[error("stability error: {0}")]
    Stability(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("validation error: {0}")]
    Validation(String),
    #[error("resource error: {0}")]
    Resource(String),
    #[error("usage error: {0}")]
    Usage(String),
    #[error("precondition error: {0}")]
    Precondition(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
