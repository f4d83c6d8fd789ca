use thiserror::Error;

/// Errors raised by the lattice, space, operator and pencil constructors.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("index set of cardinality {0} exceeds the enumeration limit of {1}")]
    CardinalityTooLarge(usize, usize),
    #[error("ground sets differ: {0} vs {1}")]
    GroundMismatch(String, String),
    #[error("{0} is not a subset of {1}")]
    NotASubset(String, String),
    #[error("configuration has an empty domain")]
    EmptyDomain,
    #[error("map is not a bijection of {0}")]
    NotABijection(String),
    #[error("invalid index set: {0}")]
    InvalidIndexSet(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("vectors live in different spaces")]
    SpaceMismatch,
    #[error("sector {0} is outside the truncation n_max = {1}")]
    TruncationExceeded(usize, usize),
    #[error("sector of dimension {0} exceeds the dense storage cap of {1}")]
    SectorTooLarge(usize, usize),
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;
