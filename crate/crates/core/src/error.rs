use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("generator index {index} out of range for alphabet of size {alphabet_size}")]
    LetterOutOfRange { index: u32, alphabet_size: u32 },

    #[error("cannot parse word token `{0}` (expected `g<i>` or `g<i>^-1`)")]
    BadWordToken(String),

    #[error("cannot parse platform `{0}` (expected `free:r`, `sym:n` or `braid:n`)")]
    BadPlatform(String),

    #[error("platform rank {rank} unsupported: {reason}")]
    BadRank { rank: u32, reason: &'static str },

    #[error("substitution expects {expected} images, got {actual}")]
    ImageCountMismatch { expected: usize, actual: usize },

    #[error("permutation images are only defined for braid and symmetric platforms")]
    NoPermutationImage,

    #[error("symmetric degree {degree} exceeds the exhaustive-search bound {max}")]
    DegreeTooLarge { degree: u32, max: u32 },

    #[error("empty generator pool for {role}")]
    EmptyGeneratorPool { role: &'static str },

    #[error("invalid protocol configuration: {0}")]
    InvalidConfig(String),

    #[error("token tuple length mismatch: expected {expected}, got {actual}")]
    TupleLengthMismatch { expected: usize, actual: usize },

    #[error("malformed transcript: {0}")]
    MalformedTranscript(String),

    #[error("{what} out of range: {value}")]
    OutOfRange { what: &'static str, value: f64 },

    #[error("polynomial fit of degree {degree} needs {needed} distinct points, got {got}")]
    Underdetermined {
        degree: usize,
        needed: usize,
        got: usize,
    },

    #[error("a conjugacy instance needs at least one pair")]
    EmptyInstance,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("bad json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
