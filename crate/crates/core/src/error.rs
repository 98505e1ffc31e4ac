use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("input sequence is empty")]
    EmptyInput,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("value {value} at index {index} is reserved as the +infinity sentinel")]
    SentinelValue { index: usize, value: i64 },
    #[error("length mismatch: {what} has {got} entries, expected {expected}")]
    LengthMismatch { what: &'static str, expected: usize, got: usize },
    #[error("arithmetic overflow: {0}")]
    Overflow(String),
    #[error("key {key} outside universe [0, {universe})")]
    OutOfUniverse { key: u64, universe: u64 },
    #[error("universe of 2^{bits} keys is not supported (limit 2^{limit})")]
    UniverseTooLarge { bits: u32, limit: u32 },
    #[error("batch is not strictly increasing at position {0}")]
    UnsortedBatch(usize),
    #[error("key {0} is already present")]
    KeyPresent(u64),
    #[error("key {0} is not present")]
    KeyAbsent(u64),
    #[error("duplicate coordinate {0}")]
    DuplicateCoordinate(usize),
    #[error("unknown point {0}")]
    UnknownPoint(usize),
    #[error("score for key {key} would decrease from {old} to {new}")]
    ScoreDecrease { key: u64, old: i64, new: i64 },
    #[error("brute-force oracle capped at n = {cap}, got n = {n}")]
    OracleCap { n: usize, cap: usize },
    #[error("dataset format error at line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
