use thiserror::Error;

/// Errors raised by code construction, decoding setup and analysis.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported field degree m={0} (configured range is 3..=10)")]
    UnsupportedFieldDegree(u32),

    #[error("invalid exponent {exponent} for GF(2^{m})")]
    InvalidExponent { m: u32, exponent: usize },

    #[error("design distance too large: BCH(m={m}, t={t}) leaves no information bits")]
    DesignDistanceTooLarge { m: u32, t: usize },

    #[error("degenerate offset set: parity matrix rank {rank}, expected {expected}")]
    DegenerateOffsets { rank: usize, expected: usize },

    #[error("alist parse error at line {line}: {msg}")]
    AlistParse { line: usize, msg: String },

    #[error("unknown code key `{0}`")]
    UnknownCode(String),

    /// Command-line parse failure, already formatted for the terminal.
    #[error("{0}")]
    Usage(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("empty sample set")]
    EmptySampleSet,

    #[error("trace is missing iteration {0}")]
    MissingIteration(usize),

    #[error("no intersection of I_EV and I_EC within {horizon} iterations")]
    NoIntersection { horizon: usize },

    #[error("objective is non-finite at every probe")]
    NonFiniteObjective,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
