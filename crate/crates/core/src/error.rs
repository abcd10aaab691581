use thiserror::Error;

/// Errors raised by the exact constructions and certifiers.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("gcd is undefined for (0, 0)")]
    BothZero,
    #[error("{0} is not square-free")]
    NotSquarefree(u64),
    #[error("value {0} does not fit the small-integer kernel")]
    TooLarge(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("zero coefficient in quadratic form at position {0}")]
    ZeroCoefficient(usize),
    #[error("gram matrix is not diagonal")]
    NotDiagonal,
    #[error("vector is isotropic (zero norm)")]
    Isotropic,
    #[error("vector is not space-like under the principal embedding")]
    NotSpaceLike,
    #[error("hyperplanes intersect")]
    Intersecting,
    #[error("matrix is not orthogonal for the form")]
    NotOrthogonal,
    #[error("non-rational entry where a rational was required")]
    NotRational,
    #[error("elements from different quadratic fields Q(sqrt {0}) and Q(sqrt {1})")]
    FieldMismatch(u64, u64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("certificate failure: {0}")]
    CertificateFailed(String),
    #[error("counting budget of {budget} nodes exhausted at modulus {modulus}")]
    BudgetExceeded { budget: u64, modulus: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
