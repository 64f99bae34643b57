use thiserror::Error;

/// Errors raised anywhere in the library.
///
/// Variants split into two families: input validation (bad parameters,
/// inadmissible data, domain violations) and numerical budget failures
/// (quadrature or extrapolation that could not reach its tolerance).
/// [`Error::is_numerical`] tells them apart; the command-line front end maps
/// them to different exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("pole of the Gamma function at x = {0}")]
    Pole(f64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("growth admissibility violated: {0}")]
    Admissibility(String),

    #[error("smoothness budget exceeded: {0}")]
    Smoothness(String),

    #[error("insufficient signal: {0}")]
    InsufficientSignal(String),

    #[error("resource limit: {0}")]
    Resource(String),

    #[error("quadrature did not converge after {subdivisions} subdivisions (estimated error {error:e})")]
    NonConvergence { subdivisions: usize, error: f64 },

    #[error("finite-difference extrapolation did not converge (estimate {estimate:e}, error {error:e})")]
    StepSize { estimate: f64, error: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures of a numerical budget rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence { .. }
                | Error::StepSize { .. }
                | Error::Resource(_)
                | Error::InsufficientSignal(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
