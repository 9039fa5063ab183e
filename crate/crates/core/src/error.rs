use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of a mathematical function.
    #[error("domain error: {0}")]
    Domain(String),

    /// A plan, sample or configuration violates one of its invariants.
    #[error("validation error: {0}")]
    Validation(String),

    #[error("MLE for τ{cause} does not exist: no cause-{cause} failures observed")]
    MleNonexistent { cause: u8 },

    #[error("improper posterior for τ{cause}: shape {shape}, rate {rate}")]
    ImproperPosterior { cause: u8, shape: f64, rate: f64 },

    /// The posterior expectation behind a Bayes estimator diverges.
    #[error("Bayes estimate for τ{cause} does not exist: {reason}")]
    EstimateNonexistent { cause: u8, reason: String },

    #[error("parse error at line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("I/O error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    /// True for the errors that signal a nonexistent estimator rather than bad input.
    pub fn is_nonexistence(&self) -> bool {
        matches!(
            self,
            Error::MleNonexistent { .. }
                | Error::ImproperPosterior { .. }
                | Error::EstimateNonexistent { .. }
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
