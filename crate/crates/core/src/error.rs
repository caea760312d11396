use thiserror::Error;

/// Errors raised by state construction, measures and bounds.
#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("state is not normalized (norm² = {0})")]
    NotNormalized(f64),

    #[error("matrix is not Hermitian (max asymmetry {0:e})")]
    NotHermitian(f64),

    #[error("trace is not 1 (got {0})")]
    InvalidTrace(f64),

    #[error("matrix is not positive semi-definite (min eigenvalue {0:e})")]
    NotPsd(f64),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("party count {n} exceeds the configured cap of {cap}")]
    ResourceCap { n: usize, cap: usize },

    #[error("degenerate witness: {0}")]
    DegenerateWitness(String),

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
