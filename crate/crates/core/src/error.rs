use thiserror::Error;

use crate::algebra::numeric::BigComplex;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("zero input")]
    ZeroInput,
    #[error("degree too small: need at least {needed}, got {got}")]
    DegreeTooSmall { needed: usize, got: usize },
    #[error("variable mismatch: {0} vs {1}")]
    VariableMismatch(String, String),
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("root finder did not converge after {iterations} iterations at {bits} bits")]
    NonConvergence { iterations: usize, bits: usize, partial: Vec<BigComplex> },
    #[error("invalid degree {0}: expected 5 or 6")]
    InvalidDegree(usize),
    #[error("nodal model requires distinct Weierstrass points")]
    RepeatedRoots,
    #[error("point on branch locus of projection")]
    BranchLocus,
    #[error("point does not lie on the surface")]
    NotOnSurface,
    #[error("non-reduced fibration")]
    NonReduced,
    #[error("no rational 2-torsion at origin")]
    NoTwoTorsion,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("root enumeration requires definite lattice")]
    Indefinite,
    #[error("non-integral pairing between {0} and {1}: {2}")]
    NonIntegralPairing(String, String, String),
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),
    #[error("singular curve: I10 vanishes")]
    SingularCurve,
    #[error("linear system has unexpected solution dimension {dimension} (rank {rank}) for {what}")]
    UnexpectedDimension { what: String, rank: usize, dimension: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("identity failed: {what}; difference {difference}")]
    IdentityMismatch { what: String, difference: String },
}
