use thiserror::Error;

/// Errors raised by the algebraic and numerical routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("index {index} out of range 1..={rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("automorphism component {0} has a nonzero constant term")]
    NonZeroConstantTerm(usize),
    #[error("form is not closed")]
    NotClosed,
    #[error("truncation overflow: {0}")]
    Overflow(String),
    #[error("insufficient headroom: {0}")]
    Headroom(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn shape(msg: impl Into<String>) -> Error {
    Error::Shape(msg.into())
}
