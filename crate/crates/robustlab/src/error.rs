use thiserror::Error;

/// Crate-wide error type. Variants mirror the failure signals of the
/// individual subsystems so callers can match on what actually went wrong.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("inconsistent linear system: target not in span")]
    InconsistentSystem,
    #[error("no unit pivot available (non-prime modulus pathology)")]
    NonUnitPivot,
    #[error("requested weight {weight} exceeds length {len}")]
    WeightOutOfRange { weight: usize, len: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("rejection sampler exceeded {0} attempts")]
    RejectionExhausted(usize),
    #[error("resampling exhausted after {attempts} attempts: {what}")]
    ResampleExhausted { what: String, attempts: usize },
    #[error("decode failure: no codeword within radius")]
    DecodeFailure,
    #[error("span model not saturated (rank {rank} of {expected})")]
    Unsaturated { rank: usize, expected: usize },
    #[error("insufficient training data: {0}")]
    InsufficientData(String),
    #[error("input outside function domain")]
    OutOfDomain,
    #[error("adversary budget {requested} exceeds family budget {allowed}")]
    BudgetExceeded { requested: u64, allowed: u64 },
    #[error("instance too large for exhaustive computation: {0}")]
    SizeGuard(String),
    #[error("prime search exhausted")]
    PrimeSearchExhausted,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported format version: {0}")]
    Version(String),
    #[error("secret material may not be read here: {0}")]
    SecretPathRejected(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
