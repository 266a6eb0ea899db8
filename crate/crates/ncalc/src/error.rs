//! Crate-wide error type.

use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum NcalcError {
    #[error("generator count mismatch: {left} vs {right}")]
    GeneratorCountMismatch { left: usize, right: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("index {index} out of range (< {bound} required)")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("algebra mismatch: operands live over different algebras")]
    AlgebraMismatch,

    #[error("degree {degree} invalid here: {reason}")]
    DegreeError { degree: usize, reason: String },

    #[error("computational cap exceeded: {what} = {value} > bound {bound}")]
    CapExceeded {
        what: String,
        value: usize,
        bound: usize,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error at {line}:{column}: {message}")]
    ParseError {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
}

pub type Result<T> = std::result::Result<T, NcalcError>;
