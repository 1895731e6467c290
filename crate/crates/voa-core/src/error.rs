use thiserror::Error;

/// Library-wide error type.
///
/// `CapExceeded` is deliberately distinct from the other variants so callers
/// can map it to a dedicated exit status: it signals a resource ceiling, not a
/// mathematical failure.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("invalid ring: {0}")]
    InvalidRing(String),

    #[error("ring element does not belong to {0}")]
    RingMismatch(&'static str),

    #[error("{value} is not invertible in {ring}")]
    NotAUnit { value: String, ring: String },

    #[error("denominator {denom} is not invertible in {ring}")]
    Specialization { denom: String, ring: String },

    #[error("vector of norm {0} is not a root (norm 2 required)")]
    NotARoot(i64),

    #[error("group closure exceeded cap of {cap} elements")]
    CapExceeded { cap: usize },

    #[error("cover lift is inconsistent: {0}")]
    InconsistentLift(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
