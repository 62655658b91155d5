use thiserror::Error;

/// Errors produced by the design, evaluation and simulation routines.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An overlap plan is inconsistent with the constellation it describes.
    #[error("invalid overlap plan: {0}")]
    InvalidPlan(String),

    /// No symmetric overlap plan exists for the requested sizes.
    #[error("overlap plan infeasible: {0}")]
    PlanInfeasible(String),

    /// A codebook file could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    /// A parsed structure violates one of its invariants.
    #[error("validation error: {0}")]
    Validation(String),

    /// Exhaustive enumeration was requested beyond the configured cap.
    #[error("exhaustive enumeration of {size} superimposed codewords exceeds the cap of {cap}; use the Monte-Carlo mode or raise the cap")]
    CapExceeded { size: u128, cap: u128 },

    /// A computation produced a non-finite value.
    #[error("numerical error: {0}")]
    Numerical(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by bad input rather than a failed computation.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Domain(_)
                | Error::InvalidPlan(_)
                | Error::PlanInfeasible(_)
                | Error::Parse(_)
                | Error::Validation(_)
                | Error::CapExceeded { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
