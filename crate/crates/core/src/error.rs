use std::path::PathBuf;

/// Errors reported by the combinators and the benchmark kernels built on them.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("index {index} out of bounds for length {len}")]
    IndexOutOfBounds { index: i64, len: usize },

    #[error("index {index} written more than once by scatter")]
    DuplicateIndex { index: usize },

    #[error("malformed segment flags: {0}")]
    MalformedSegments(&'static str),

    #[error("grid side {0} is not a power of two >= 2")]
    NotPowerOfTwo(usize),

    #[error("grid side {0} is not even")]
    OddSide(usize),

    #[error("degenerate input: {0}")]
    Degenerate(&'static str),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("input too large: {what} = {value} exceeds cap {cap}")]
    TooLarge {
        what: &'static str,
        value: usize,
        cap: usize,
    },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid benchmark spec: {0}")]
    InvalidSpec(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
