use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An input lies outside the domain where the operation is defined.
    #[error("{quantity}: {reason}")]
    Domain {
        quantity: &'static str,
        reason: &'static str,
    },

    #[error("state {state} is not a hyperfine level of {species}")]
    InvalidState { species: String, state: String },

    /// The paper-mode Breit-Rabi square root went negative.
    #[error("negative Breit-Rabi radicand {radicand:e} for {state} of {species}")]
    NegativeRadicand {
        species: String,
        state: String,
        radicand: f64,
    },

    #[error("state vector is not normalized (norm^2 = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("matrix is not unitary (max |U^dag U - I| = {defect:e})")]
    NotUnitary { defect: f64 },

    #[error("invalid gate schedule: {0}")]
    InvalidSchedule(&'static str),

    /// max|H| * h exceeded the allowed bound at time `time`.
    #[error("integrator step too large: |H| h = {product} > {limit} at t = {time:e} s")]
    StepTooLarge { product: f64, limit: f64, time: f64 },

    #[error("norm drifted by {drift:e} during unitary evolution (limit {limit:e})")]
    NormDrift { drift: f64, limit: f64 },

    #[error("quadrature did not converge after {intervals} intervals (last change {change:e})")]
    QuadratureDiverged { intervals: usize, change: f64 },
}

impl Error {
    pub(crate) fn domain(quantity: &'static str, reason: &'static str) -> Self {
        Error::Domain { quantity, reason }
    }

    /// True for failures of a numerical method (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NormDrift { .. } | Error::QuadratureDiverged { .. })
    }
}
