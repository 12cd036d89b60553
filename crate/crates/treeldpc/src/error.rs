//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("unsupported field size {q}: cap is {cap}")]
    UnsupportedField { q: u64, cap: u64 },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("element index {index} out of range for a field of order {q}")]
    ElementRange { index: u32, q: u32 },
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("cycle notation parse error: {0}")]
    CycleParse(String),
    #[error("invalid construction parameters: {0}")]
    InvalidParams(String),
    #[error("duplicate edge between variable {var} and check {chk}")]
    DuplicateEdge { var: usize, chk: usize },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("alist parse error at line {line}: {msg}")]
    AlistParse { line: usize, msg: String },
    #[error("config error at line {line}: {msg}")]
    Config { line: usize, msg: String },
    #[error("invalid cover: {0}")]
    InvalidCover(String),
    #[error("vector is not a codeword of the lifted graph")]
    NotCoverCodeword,
    #[error("invalid simulation config: {0}")]
    InvalidSimConfig(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
