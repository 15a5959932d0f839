use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input violated a structural or physical invariant.
    #[error("validation failed ({invariant}): {detail}")]
    Validation {
        invariant: &'static str,
        detail: String,
    },

    /// A scalar or spectral function was evaluated outside its domain.
    #[error("domain error in {function}: argument {argument:e} is outside the domain")]
    Domain {
        function: &'static str,
        argument: f64,
    },

    /// An iterative method ran out of iterations.
    #[error("{method} did not converge after {iterations} iterations (residual {residual:e})")]
    NotConverged {
        method: &'static str,
        iterations: usize,
        residual: f64,
    },

    /// The inputs make the requested quantity undefined (e.g. ρ = σ).
    #[error("degenerate input: {0}")]
    Degenerate(String),
}

impl Error {
    pub(crate) fn validation(invariant: &'static str, detail: impl Into<String>) -> Self {
        Error::Validation {
            invariant,
            detail: detail.into(),
        }
    }

    pub(crate) fn dim_mismatch(left: usize, right: usize) -> Self {
        Error::validation("dimension", format!("{left} != {right}"))
    }
}
