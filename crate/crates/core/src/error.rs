//! Error type shared by all modules of the crate.

use crate::rat::Rat;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoreError {
    #[error("dimension mismatch: expected {expected}, found {found} ({context})")]
    DimensionMismatch {
        expected: usize,
        found: usize,
        context: &'static str,
    },

    #[error("spanning set is rank deficient")]
    RankDeficientBasis,

    #[error("span is not closed under the bracket: [v{i}, v{j}] leaves the span")]
    NotASubalgebra { i: usize, j: usize },

    #[error("the given subspaces do not form a direct sum decomposition")]
    NotDirectSum,

    #[error("action is not a representation: fails on basis pair ({i}, {j})")]
    NotARepresentation { i: usize, j: usize },

    #[error("stabilizer is not bracket-closed; this indicates an internal bug")]
    StabilizerNotClosed,

    #[error("Nijenhuis torsion does not vanish: first nonzero entry at basis pair ({i}, {j})")]
    TorsionNonzero { i: usize, j: usize },

    #[error("deformed bracket fails the Jacobi identity under the override")]
    JacobiFailure,

    #[error("characteristic polynomial does not split over Q; remaining factor: {factor}")]
    IrrationalSpectrum { factor: String },

    #[error("shift by {lambda} is singular (lambda is in the spectrum)")]
    SingularShift { lambda: Box<Rat> },

    #[error("denominator operator is singular")]
    SingularDenominator,

    #[error("operator is not diagonalizable (Riesz index {riesz} at eigenvalue {lambda})")]
    NotDiagonalizable { lambda: Box<Rat>, riesz: usize },

    #[error("duplicate eigenvalue {lambda}")]
    DuplicateEigenvalue { lambda: Box<Rat> },

    #[error("sum of parts {i} and {j} is not a subalgebra: witness bracket of pair ({vi}, {vj})")]
    PairwiseSumNotSubalgebra {
        i: usize,
        j: usize,
        vi: usize,
        vj: usize,
    },

    #[error("function #{index} is not a Casimir: nonzero bracket with coordinate {coordinate}")]
    NotACasimir { index: usize, coordinate: usize },

    #[error("pencil parameter (0, 0) is not allowed")]
    ZeroParameter,

    #[error("pencil member fails the Jacobi identity at s = ({s1}, {s2})")]
    IncompatiblePencil { s1: Box<Rat>, s2: Box<Rat> },

    #[error("unknown catalog entry `{name}`")]
    UnknownCatalogEntry { name: String },

    #[error("invalid parameter: {message}")]
    InvalidParameter { message: String },

    #[error("divisor scan exceeded its budget for {value}; spectrum extraction refused")]
    DivisorSearchExceeded { value: String },
}

pub type Result<T> = std::result::Result<T, CoreError>;
