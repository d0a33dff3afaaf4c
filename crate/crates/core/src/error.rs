use thiserror::Error;

/// Errors raised by the word, sequence, class, spectrum and graph operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("length {requested} exceeds the configured limit {limit}")]
    CapacityExceeded { requested: usize, limit: usize },

    #[error("index range [{i}, {j}] is out of range for a word of length {len}")]
    IndexOutOfRange { i: usize, j: usize, len: usize },

    #[error("invalid character {0:?} in binary word (expected '0' or '1')")]
    InvalidCharacter(char),

    #[error("keyword must have length at least 2, got {0}")]
    KeywordTooShort(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("delta must be at least 1, got {0}")]
    InvalidDelta(i64),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("verification failed at n = {n}: got {got}, expected {expected}")]
    VerificationFailure {
        n: usize,
        got: String,
        expected: String,
    },

    #[error("component with {size} vertices exceeds the canonicalization cap {cap}")]
    ComponentTooLarge { size: usize, cap: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
