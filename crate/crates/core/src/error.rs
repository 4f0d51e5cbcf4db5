use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("degree of the zero polynomial is undefined")]
    ZeroDegree,
    #[error("evaluation error: {0}")]
    Evaluation(String),
    #[error("integrity error: {0}")]
    Integrity(String),
    #[error("degenerate system: rank {rank}, expected {expected}")]
    Degenerate { rank: usize, expected: usize },
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
