use thiserror::Error;

/// Default predicate tolerance for floating-point decisions.
pub const EPS_PRED: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("zero vector")]
    ZeroVector,
    #[error("input is lower dimensional: affine rank {rank}, expected {expected}")]
    LowerDimensional { rank: usize, expected: usize },
    #[error("cone is not pointed")]
    NotPointed,
    #[error("ray with non-positive x0 cannot be dehomogenized")]
    NotDehomogenizable,
    #[error("point is not strictly inside the unit ball")]
    OutsideBall,
    #[error("point is not strictly outside the unit ball")]
    InsideBall,
    #[error("vector is not space-like")]
    NotSpaceLike,
    #[error("vertex set {0:?} is not a face")]
    NotAFace(Vec<usize>),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("face is not simplicial")]
    NotSimplicial,
    #[error("vertex {0} is not simple")]
    NotSimple(usize),
    #[error("apex lies beyond more than one facet")]
    NotAStacking,
    #[error("face lattice mismatch: {0}")]
    LatticeMismatch(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("construction failed: {0}")]
    ConstructionFailed(String),
    #[error("polytope is not stacked")]
    NotStacked,
    #[error("indeterminate: {0}")]
    Indeterminate(String),
}

pub type Result<T> = std::result::Result<T, Error>;
