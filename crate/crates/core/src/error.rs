use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix must have at least one row and one column")]
    EmptyMatrix,

    #[error("unknown generator label `{0}`")]
    UnknownGenerator(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("malformed cover: {0}")]
    MalformedCover(String),

    #[error("invalid finite group: {0}")]
    InvalidGroup(String),

    #[error("quotient map is not a homomorphism: {0}")]
    NotAHomomorphism(String),

    #[error("quotient map is not surjective: image has order {image} in a group of order {order}")]
    NotSurjective { image: usize, order: usize },

    #[error("matrix does not preserve the intersection form: {0}")]
    NotSymplectic(String),

    #[error("class must be nonzero")]
    ZeroClass,

    #[error("expected genus {expected}, found {found}")]
    WrongGenus { expected: usize, found: usize },

    #[error("class has a single lift (epsilon = 1): {0}")]
    SingleLift(String),

    #[error("invalid cover model: {0}")]
    InvalidModel(String),

    #[error("invalid selection word `{word}`: {reason}")]
    InvalidWord { word: String, reason: String },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("parity filter: {0}")]
    Parity(String),

    #[error("inputs are outside the expected subspace: {0}")]
    OutsideSubspace(String),

    #[error("cup product is nonzero")]
    NonzeroCup,

    #[error("zero-divisor lemma violated: {0}")]
    LemmaViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
