use std::io;

use thiserror::Error;

/// Errors surfaced by table validation, code construction, and the file formats.
#[derive(Debug, Error)]
pub enum Error {
    /// A table entry lies outside the domain `[0, n)`.
    #[error("entry {value} at index {index} is outside the domain [0, {n})")]
    OutOfRange {
        index: usize,
        value: usize,
        n: usize,
    },

    /// The number of entries does not match the declared domain size.
    #[error("expected {expected} entries, found {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    /// The domain must contain at least one point.
    #[error("domain size must be at least 1")]
    EmptyDomain,

    /// The table is not injective, hence not a permutation.
    #[error("not a permutation: {value} is the image of both {first} and {second}")]
    NotInjective {
        value: usize,
        first: usize,
        second: usize,
    },

    /// A query point lies outside the domain.
    #[error("point {x} is outside the domain [0, {n})")]
    XOutOfRange { x: usize, n: usize },

    /// A token in a table or code file failed to parse.
    #[error("parse error on line {line}: invalid token {token:?}")]
    ParseError { line: usize, token: String },

    /// A code file does not begin with a recognized magic line.
    #[error("bad magic line {0:?}")]
    BadMagic(String),

    /// A deserialized code violates a structural invariant.
    #[error("invariant violation: {0}")]
    InvariantViolation(&'static str),

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
