use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("resource bound exceeded: {0}")]
    Resource(String),
    #[error("subgroup belongs to a different ambient group")]
    AmbientMismatch,
    #[error("not a subgroup of the ambient group: {0}")]
    NotSubgroup(String),
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("action is not a homomorphism: {0}")]
    BadAction(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("group has the wrong shape: {0}")]
    Shape(String),
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error("element is not a Brauer relation")]
    NotRelation,
    #[error("elements live over different subgroup tables")]
    TableMismatch,
    #[error("lattice error: {0}")]
    Lattice(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
