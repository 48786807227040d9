use thiserror::Error;

use crate::lattice::FanoContext;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid Fano context: {0}")]
    InvalidContext(String),

    #[error("context mismatch: {0} vs {1}")]
    ContextMismatch(FanoContext, FanoContext),

    #[error("{0} has no Kuznetsov lattice in this library")]
    UnsupportedLattice(FanoContext),

    #[error("operation not available for {0}: {1}")]
    UnsupportedContext(FanoContext, &'static str),

    #[error("class is not in the numerical lattice: {0}")]
    NotLatticeMember(String),

    #[error("zero central charge has no slope")]
    ZeroCharge,

    #[error("class has zero (rank, c1, ch2) part")]
    ZeroClass,

    #[error("slope of a class with zero rank and zero degree is undefined")]
    UndefinedSlope,

    #[error("Gieseker comparison needs positive ranks")]
    NonPositiveRank,

    #[error("Serre matrix is not integral: {0}")]
    NonIntegralSerre(String),

    #[error("gram matrix is singular")]
    SingularGram,

    #[error("only the rotation to slope 0 is supported")]
    UnsupportedRotation,

    #[error("transform must have positive determinant")]
    NonPositiveDeterminant,

    #[error("Pell coefficient {0} must be a positive non-square")]
    SquarePellCoefficient(i64),

    #[error("the total class has zero imaginary charge along beta = {0}")]
    DegenerateLine(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("empty window: {0}")]
    EmptyWindow(String),

    #[error("destabilizer hit outside the case split: {0}")]
    UnclassifiedHit(String),

    #[error("parse error: {0}")]
    Parse(String),
}
