use thiserror::Error;

use crate::numkernel::ComplexMatrix;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// More than one direction of the generator is numerically null. Every
    /// candidate is returned reshaped to a d x d matrix (not normalized, some
    /// may be traceless coherences).
    #[error("degenerate steady state: {} null directions", candidates.len())]
    DegenerateSteadyState { candidates: Vec<ComplexMatrix> },

    #[error("steady-state residual {residual:e} exceeds {tolerance:e}")]
    Residual { residual: f64, tolerance: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("singular integrand: {0}")]
    SingularIntegrand(String),

    #[error("Fock truncation n_max = {n_max} too small (tail weight {tail:e})")]
    Truncation { n_max: usize, tail: f64 },
}

impl Error {
    /// True for failures of the numerics themselves rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::DegenerateSteadyState { .. }
                | Error::Residual { .. }
                | Error::SingularIntegrand(_)
                | Error::Truncation { .. }
        )
    }
}
