//! Crate-wide error type for algebraic and geometric operations.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("matrix is not square")]
    NotSquare,
    #[error("{0} is not supported in float mode")]
    FloatModeUnsupported(&'static str),
    #[error("metric is degenerate")]
    DegenerateMetric,
    #[error("structure constants are not antisymmetric at ({i},{j})")]
    NotAntisymmetric { i: usize, j: usize },
    #[error("Jacobi identity fails on basis triple ({i},{j},{k})")]
    JacobiViolation { i: usize, j: usize, k: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is not a derivation")]
    NotADerivation,
    #[error("cocycle `{0}` is not closed")]
    NonClosedCocycle(String),
    #[error("condition violated: {0}")]
    ConditionViolated(String),
    #[error("center is not spanned by the Reeb vector")]
    CenterNotReeb,
    #[error("structure is not Sasaki: {0}")]
    NotSasaki(String),
    #[error("structure is not pseudo-Kahler: {0}")]
    NotPseudoKahler(String),
    #[error("decomposition is not z-standard: {0}")]
    NotZStandard(String),
    #[error("no derivation with symmetric part equal to the identity; the symmetric-part-identity family is empty or none was supplied")]
    NoSymmetricPartIdentity,
    #[error("complex structure J is required for the cu constraint")]
    MissingComplexStructure,
    #[error("trace system is inconsistent; no Nikolayevsky candidate exists")]
    TraceSystemInconsistent,
    #[error("input error: {0}")]
    Input(String),
}
