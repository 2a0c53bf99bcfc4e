use alloc::string::String;
use thiserror::Error;

/// Errors raised by the core library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degree p={p} out of range for dimension {d}")]
    DegreeOutOfRange { p: usize, d: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular")]
    Singular,
    #[error("Gram matrix is not symmetric positive definite")]
    NotPositiveDefinite,
    #[error("cutoff must be nonnegative, got {0}")]
    NegativeCutoff(String),
    #[error("sublattice columns are linearly dependent")]
    DependentColumns,
    #[error("isometries refer to different Gram matrices")]
    GramMismatch,
    #[error("generator {index} is not orthogonal with respect to the Gram matrix")]
    NotOrthogonal { index: usize },
    #[error("group closure exceeded {max_order} elements")]
    ClosureOverflow { max_order: usize },
    #[error("holonomy data contains the identity with a non-integral translation")]
    NonIntegralIdentityTranslation,
    #[error("characteristic polynomial is not a product of cyclotomic polynomials")]
    NotFiniteOrder,
    #[error("numeric eigenvalue cross-check failed: {0}")]
    EigenvalueCheck(String),
    #[error("eigenvalue type does not match codimension: {0}")]
    CodimensionMismatch(String),
    #[error("multiplicity at q={q} is not integral (residual {residual:e})")]
    RoundingResidual { q: String, residual: f64 },
    #[error("spectrum tables are not comparable: {0}")]
    IncomparableTables(String),
    #[error("unknown catalog name `{0}`")]
    UnknownName(String),
    #[error("invalid catalog parameters: {0}")]
    InvalidParameters(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("heat time must be positive, got {0}")]
    NonPositiveTime(f64),
    #[error("cannot parse `{0}` as a rational number")]
    ParseRational(String),
}

pub type Result<T> = core::result::Result<T, Error>;
