use std::io;

use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("word length {0} is outside 1..=24")]
    BadLength(usize),
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("value {value:#x} does not fit in {len} bits")]
    Overflow { value: u32, len: usize },
    #[error("invalid code: pair ({0}, {1}) has d_Z = {2}")]
    InvalidCode(String, String, u32),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("weight {w} out of range for length {n}")]
    BadWeight { n: usize, w: usize },
    #[error("constraint (1) violated at vertex {vertex}: in-neighbour load {load} exceeds {free} free points")]
    LoadExceeded { vertex: String, load: u64, free: u64 },
    #[error("chain constraint violated at weight {w}: {lhs} > {rhs}")]
    ChainViolated { w: usize, lhs: u64, rhs: u64 },
    #[error("no trade-off row for length {n} and size {m}")]
    MissingRow { n: usize, m: usize },
    #[error("no trade-off table for second-stage length {0}")]
    MissingTable(usize),
    #[error("message {0} out of range")]
    BadMessage(u64),
    #[error("feedback {feedback} is not reachable from {sent} by at most one asymmetric error")]
    Unreachable { sent: String, feedback: String },
    #[error("received word {0} is neither in a shadow nor a labelled free point")]
    UnreachableWord(String),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
