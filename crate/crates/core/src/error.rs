use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("map is not surjective: {0}")]
    NotSurjective(String),
    #[error("inconsistent pinning: {0}")]
    Pinning(String),
    #[error("map is not invertible: {0}")]
    NotInvertible(String),
    #[error("malformed structure: {0}")]
    Structure(String),
    #[error("composition boundary mismatch: {0}")]
    Composition(String),
    #[error("degree out of range: {0}")]
    Degree(String),
    #[error("not induced by a chain-level map: {0}")]
    NotInduced(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
