use thiserror::Error;

/// Error type shared by every module of the crate.
#[derive(Debug, Error)]
pub enum CoarseError {
    #[error("point {0} is not in the space")]
    UnknownPoint(String),

    #[error("not a subset of the space: {0} is missing")]
    NotASubset(String),

    #[error("radius {0} is not usable in this space")]
    InvalidRadius(String),

    #[error("spaces have different sizes: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("instance size {size} exceeds the search cap {cap}")]
    CapExceeded { size: usize, cap: usize },

    #[error("map is not a bijection between the spaces: {0}")]
    NotBijective(String),

    #[error("seeds are identical after normalization")]
    IdenticalSeeds,

    #[error("invalid seed: {0}")]
    InvalidSeed(String),

    #[error("interval sequence too short: need at least {required} entries")]
    SequenceTooShort { required: usize },

    #[error("subgroup chain too short: need level {required}")]
    ChainTooShort { required: usize },

    #[error("parameter out of bounds: {0}")]
    ParameterViolation(String),

    #[error("enumeration cap exceeded: {0}")]
    EnumerationCap(String),

    #[error("largeness precondition failed: {0}")]
    LargenessFailed(String),

    #[error("gap violation: {0}")]
    GapViolation(String),

    #[error("covering precondition failed: {0}")]
    CoveringFailed(String),

    #[error("search budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("no witness found: {0}")]
    WitnessNotFound(String),

    #[error("condition check failed: {0}")]
    ConditionFailed(String),

    #[error("certificate schema error: {0}")]
    Schema(String),
}

pub type Result<T> = std::result::Result<T, CoarseError>;
