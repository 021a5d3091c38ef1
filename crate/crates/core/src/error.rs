use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The parameter lies outside the region where a formula is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// The phase shift is too large for the linearised interferometer model.
    #[error("phase {phi} outside the linear validity range |phi| <= {limit}")]
    PhaseOutOfRange { phi: f64, limit: f64 },

    /// The truncated Fock space lost more probability than the policy allows.
    #[error("truncation at n_max = {n_max} lost {lost:.3e} of the norm (tolerance {tolerance:.1e})")]
    Truncation { n_max: usize, lost: f64, tolerance: f64 },

    #[error("no sign change of the stationarity condition found for alpha = {alpha}")]
    Bracketing { alpha: f64 },
}

impl Error {
    /// True for failures of a numerical procedure rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Truncation { .. } | Error::Bracketing { .. })
    }
}
