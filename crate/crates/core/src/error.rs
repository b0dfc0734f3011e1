use thiserror::Error;

/// Errors raised by the library.
///
/// Variants fall into three groups used by the command-line front-end for
/// exit codes: input/domain errors, hypothesis violations and numeric
/// failures. See [`Error::is_hypothesis`] and [`Error::is_numeric`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("difference step must be nonzero")]
    ZeroStep,
    #[error("step h must be positive, got {0}")]
    NonPositiveStep(String),
    #[error("zero polynomial not allowed: {0}")]
    ZeroPolynomial(&'static str),
    #[error("leading coefficient g vanishes at lattice point x = {point}")]
    Pole { point: String },
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("denominator vanishes: {0}")]
    DenominatorZero(String),
    #[error("uncancelled pole of the generalized gamma function in factor {0}")]
    UncancelledPole(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn is_hypothesis(&self) -> bool {
        matches!(self, Error::Hypothesis(_))
    }

    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::Numeric(_) | Error::UncancelledPole(_) | Error::DenominatorZero(_) | Error::Pole { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
