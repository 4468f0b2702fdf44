use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ellipticity violated: mode {mode} has zero leading coefficient")]
    Ellipticity { mode: usize },

    #[error("invalid operator: {0}")]
    InvalidOperator(String),

    #[error("critical rate {rate} coincides with {what}")]
    EndpointCollision { rate: String, what: String },

    #[error("simple-real-root assumption violated for mode {mode}: {detail}")]
    AssumptionViolation { mode: usize, detail: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid window: {0}")]
    InvalidWindow(String),

    #[error("discretization error: {0}")]
    Discretization(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("eigenvalue pairing failed: {0}")]
    PairingFailure(String),

    #[error("inconsistent input: {0}")]
    InconsistentInput(String),

    #[error("unsupported range: {0}")]
    UnsupportedRange(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("unsupported expression: {0}")]
    UnsupportedExpression(String),

    #[error("rate window violated: {0}")]
    RateWindow(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

impl Error {
    /// Errors that indicate a broken internal identity rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Inconsistency(_))
    }
}
