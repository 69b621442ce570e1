use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("malformed rational `{0}`: expected p/q")]
    MalformedRational(String),
    #[error("enumeration budget exceeded: {0}")]
    EnumerationBudget(String),
    #[error("unstable type: {0}")]
    Unstable(String),
    #[error("non-convergent deformation: {0}")]
    NonConvergentDeformation(String),
    #[error("degenerate quadratic form")]
    DegenerateQuadraticForm,
    #[error("not a critical point: {0}")]
    NotCritical(String),
    #[error("shift too large: epsilon = {0} must be < 1")]
    ShiftTooLarge(String),
    #[error("malformed algebra: {0}")]
    MalformedAlgebra(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Stable machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "division_by_zero",
            Error::MalformedRational(_) => "malformed_rational",
            Error::EnumerationBudget(_) => "enumeration_budget",
            Error::Unstable(_) => "unstable",
            Error::NonConvergentDeformation(_) => "non_convergent_deformation",
            Error::DegenerateQuadraticForm => "degenerate_quadratic_form",
            Error::NotCritical(_) => "not_critical",
            Error::ShiftTooLarge(_) => "shift_too_large",
            Error::MalformedAlgebra(_) => "malformed_algebra",
            Error::InvalidInput(_) => "invalid_input",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
