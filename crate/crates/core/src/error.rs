use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("bad coefficient literal {literal:?}: {reason}")]
    Coefficient { literal: String, reason: String },
    #[error("bad monomial key {key:?}: {reason}")]
    Monomial { key: String, reason: String },
    #[error("bad exponent {literal:?}")]
    Exponent { literal: String },
    #[error("{path}: {message}")]
    Json { path: String, message: String },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("series has zero constant term and is not invertible")]
    NotAUnit,
    #[error("inner series of a composition must have zero constant term")]
    InnerNotNilpotent,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("curve polynomial is zero")]
    ZeroPolynomial,
    #[error("curve does not pass through the origin (f(0,0) = {0})")]
    NotThroughOrigin(String),
    #[error("branch is not centered at the origin")]
    NotCentered,
    #[error("branch is identically zero mod s^{0}")]
    ZeroBranch(usize),
    #[error("branch is not primitive: exponent gcd is {0}")]
    NotPrimitive(u64),
    #[error("branch {branch} does not lie on the curve: residual order {residual} < {order}")]
    NotOnCurve { branch: usize, residual: usize, order: usize },
    #[error("branches {0} and {1} coincide mod the truncation order")]
    DuplicateBranch(usize, usize),
    #[error("normalization has no branches")]
    NoBranches,
    #[error("branch orders differ ({0} vs {1})")]
    OrderMismatch(usize, usize),
    #[error("irrational leading coefficient: {edge}")]
    IrrationalLeadingCoefficient { edge: String },
    #[error("directions {0} and {1} are proportional")]
    DuplicateDirection(usize, usize),
    #[error("direction {0} is zero")]
    ZeroDirection(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("order mismatch: expected {expected}, found {found}")]
    OrderMismatch { expected: usize, found: usize },
    #[error("expected {expected} targets (one per branch), found {found}")]
    TargetCount { expected: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConnectionError {
    #[error("initial value matrix is singular")]
    SingularInitialValue,
    #[error("rank {0} is not supported by this operation (rank 1 only)")]
    RankNotSupported(usize),
    #[error("connection matrix is not {0}x{0}")]
    Shape(usize),
    #[error("connection entries live on different curves")]
    CurveMismatch,
    #[error("branch order {have} is below the requested order {want}")]
    BranchTooShort { have: usize, want: usize },
    #[error("order must be at least 2, got {0}")]
    OrderTooSmall(usize),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}
