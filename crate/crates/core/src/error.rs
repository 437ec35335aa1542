use thiserror::Error;

use crate::exactlin::Field;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch { left: Field, right: Field },

    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch { context: &'static str, expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("modulus {0} is too large (must be below 2^61)")]
    ModulusTooLarge(u64),

    #[error("cannot parse scalar {text:?}: {reason}")]
    ParseScalar { text: String, reason: String },

    #[error("invalid bracket index ({i}, {j}) for dimension {dim}")]
    InvalidBracket { i: usize, j: usize, dim: usize },

    #[error("not a Lie algebra: {0} Jacobi violation(s)")]
    NotALieAlgebra(usize),

    #[error("algebra {0:?} is not abelian")]
    NotAbelian(String),

    #[error("not a module action: {0} compatibility violation(s)")]
    NotAModule(usize),

    #[error("map is not a Lie algebra homomorphism")]
    NotAHomomorphism,

    #[error("map is not an automorphism: {0}")]
    NotAnAutomorphism(&'static str),

    #[error("matrix is not invertible")]
    NotInvertible,

    #[error("malformed extension: {0}")]
    MalformedExtension(String),

    #[error("cochain is not a {0}-cocycle")]
    NotACocycle(usize),

    #[error("degree {degree} is out of range 0..={max}")]
    DegreeOutOfRange { degree: usize, max: usize },

    #[error("cochains or pairs refer to different module actions")]
    ActionMismatch,

    #[error("extensions are incomparable: {0}")]
    Incomparable(&'static str),

    #[error("automorphism does not preserve the kernel A")]
    NotInAutA,

    #[error("pair is not compatible with the module action (fails at basis element {0})")]
    IncompatiblePair(usize),

    #[error("pair is not inducible")]
    NotInducible,

    #[error("a finite field is required")]
    FiniteFieldRequired,

    #[error("enumeration too large: {0}")]
    EnumerationTooLarge(String),

    #[error("internal consistency check failed: {0}")]
    Consistency(String),
}
