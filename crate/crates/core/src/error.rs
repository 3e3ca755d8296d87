use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("at least two points are required, got {0}")]
    InsufficientPoints(usize),
    #[error("abscissae must be strictly increasing (index {0})")]
    UnsortedInput(usize),
    #[error("non-finite value at index {0}")]
    NonFinite(usize),
    #[error("query {value} outside [{lo}, {hi}]")]
    OutOfDomain { value: f64, lo: f64, hi: f64 },
    #[error("level {0} exceeds the supremum of the function")]
    AboveRange(f64),
    #[error("invalid switch-relation instance: {0}")]
    InvalidSwitchInstance(String),
    #[error("empty data")]
    EmptyData,
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("duplicate abscissa {0}")]
    DuplicateAbscissae(f64),
    #[error("invalid data: {0}")]
    InvalidData(String),
    #[error("evaluation point is not interior: {0}")]
    BoundaryEvaluation(String),
    #[error("singular coefficient system")]
    SingularCoefficientSystem,
    #[error("numerical-derivative offset {0} escapes the domain")]
    StepOutOfDomain(f64),
    #[error("missing derivative estimate for j = {0}")]
    IncompleteDEstimates(u32),
    #[error("bias constant is zero")]
    ZeroBiasConstant,
    #[error("rule-of-thumb fit failed ({reason}); fallback step {fallback}")]
    RotFitFailed { reason: String, fallback: f64 },
    #[error("subsample size {m} not in 1..={n}")]
    BadSubsampleSize { m: usize, n: usize },
    #[error("no bootstrap draws")]
    EmptyDraws,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// True for errors caused by the estimator being undefined at the
    /// requested point rather than by malformed input.
    pub fn is_domain_error(&self) -> bool {
        matches!(
            self,
            Error::BoundaryEvaluation(_) | Error::OutOfDomain { .. } | Error::StepOutOfDomain(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
