use thiserror::Error;

/// Every failure the toolkit reports. Absence of an inverse is an ordinary
/// outcome and is reported through [`Error::InverseAbsent`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("ring mismatch: {left} vs {right}")]
    RingMismatch { left: String, right: String },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("element is not invertible")]
    NotInvertible,
    #[error("element is not regular (no inner inverse exists)")]
    NotRegular,
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("inverse does not exist: {0}")]
    InverseAbsent(String),
    #[error("method `{method}` is not available on {ring}")]
    UnsupportedMethod { method: String, ring: String },
    #[error("not a unit of the corner ring: {0}")]
    SingularCorner(String),
    #[error("spectral precondition failed: {0}")]
    SpectralPreconditionFailed(String),
    #[error("no convergence: {0}")]
    ConvergenceFailure(String),
    #[error("enumeration cap exceeded: {0}")]
    CapExceeded(String),
    #[error("invariant violated: {0}")]
    InvariantViolated(String),
    #[error("invalid ring descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for errors caused by malformed or inadmissible input rather than
    /// by a mathematical outcome (absent inverse, refuted property, ...).
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::RingMismatch { .. }
                | Error::DimensionMismatch(_)
                | Error::PreconditionFailed(_)
                | Error::UnsupportedMethod { .. }
                | Error::CapExceeded(_)
                | Error::InvalidDescriptor(_)
                | Error::Parse(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
