use thiserror::Error;

/// Failures reported by the solvers and special functions.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the supported domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iteration did not reach its tolerance.
    #[error("convergence failure in {routine} after {iterations} iterations")]
    Convergence { routine: &'static str, iterations: usize },

    /// No sign change of a characteristic function could be located.
    #[error("bracket failure: {0}")]
    Bracket(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for errors caused by invalid input rather than numerics.
    pub fn is_domain(&self) -> bool {
        matches!(self, Error::Domain(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
