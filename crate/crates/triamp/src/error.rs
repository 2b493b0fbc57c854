use std::io;

use thiserror::Error;

/// Errors produced by tensor, diagram, and decomposition operations.
#[derive(Debug, Error)]
pub enum Error {
    /// Operand shapes are incompatible (dimension or length mismatch).
    #[error("shape mismatch: {0}")]
    Shape(String),
    /// An argument is outside the operation's domain (bad mode, zero input, ...).
    #[error("invalid argument: {0}")]
    Invalid(String),
    /// A computation was refused because an intermediate would exceed the entry budget.
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    /// A tensor or diagram file could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
