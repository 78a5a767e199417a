use thiserror::Error;

/// Errors surfaced by the public API. Arithmetic on values that were
/// validated at a boundary (same field, same dimensions) does not fail.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("field mismatch: expected {expected}, found {found}")]
    FieldMismatch { expected: String, found: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("division by zero")]
    DivisionByZero,

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("parameter count mismatch: expected {expected}, found {found}")]
    ParameterCountMismatch { expected: usize, found: usize },

    #[error("sample set of size {size} does not exceed degree bound {degree}; probability bound is vacuous")]
    SampleSetTooSmall { degree: u32, size: u64 },

    #[error("operation requires characteristic zero, field has characteristic {0}")]
    PositiveCharacteristic(u64),

    #[error("normality is undefined over finite fields")]
    NormalityUndefined,

    #[error("matrix {which} is not nilpotent")]
    NotNilpotent { which: String },

    #[error("matrix {which} is not normal")]
    NotNormal { which: String },

    #[error("enumeration of {size} elements exceeds cap {cap}")]
    EnumerationTooLarge { size: u128, cap: u64 },

    #[error("space over an infinite field cannot be enumerated")]
    NotEnumerable,

    #[error("polynomial is not squarefree")]
    NotSquarefree,

    #[error("matrix is not antisymmetric")]
    NotAntisymmetric,

    #[error("pencil direction must be nonzero")]
    ZeroPencilDirection,

    #[error("search budget |t| <= {budget} exhausted after {tried} candidates")]
    BudgetExhausted { budget: String, tried: u64 },

    #[error("eigenvalues are not Gaussian-rational or matrix is not diagonalizable: {0}")]
    NotExactEligible(String),

    #[error("matrix {matrix} does not refine block {block} into eigenspace intersections; family is not simultaneously diagonalizable")]
    NotSimultaneouslyDiagonalizable { matrix: usize, block: usize },

    #[error("precondition not satisfied: {0}")]
    PreconditionFailed(String),

    #[error("invalid scalar literal `{0}`")]
    InvalidScalar(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
