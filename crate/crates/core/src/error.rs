use thiserror::Error;

/// Errors produced by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("mass must be strictly positive and finite, got {0}")]
    NonPositiveMass(f64),

    #[error("length must be strictly positive and finite, got {0}")]
    NonPositiveLength(f64),

    #[error("radius must be non-negative, got {0}")]
    NegativeRadius(f64),

    #[error("{name} must be strictly positive and finite, got {value}")]
    NonPositiveInput { name: &'static str, value: f64 },

    #[error("invalid configuration: {0}")]
    InvalidSpec(String),

    /// The adaptive quadrature ran out of subdivisions. The best estimate is kept.
    #[error(
        "quadrature did not converge after {subdivisions} subdivisions \
         (estimate {estimate:e}, error {abs_error:e})"
    )]
    MaxSubdivisionsExceeded {
        estimate: f64,
        abs_error: f64,
        subdivisions: usize,
    },

    #[error("no sign change of the objective in [{lo:e}, {hi:e}]")]
    BracketFailure { lo: f64, hi: f64 },

    #[error("integrand produced a non-finite value")]
    NonFiniteIntegrand,

    #[error("step size underflow at t = {t:e} (h = {h:e})")]
    StepSizeUnderflow { t: f64, h: f64 },

    #[error("non-finite state encountered at t = {t:e}")]
    NonFiniteState { t: f64 },

    #[error("norm drift {drift:e} at step {step} exceeds the per-step limit {limit:e}")]
    NormDrift { step: usize, drift: f64, limit: f64 },

    #[error("oracle mismatch in {what}: relative difference {rel_diff:e} > {tol:e}")]
    OracleMismatch {
        what: &'static str,
        rel_diff: f64,
        tol: f64,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_mass(m: f64) -> Result<f64> {
    if m > 0.0 && m.is_finite() {
        Ok(m)
    } else {
        Err(Error::NonPositiveMass(m))
    }
}

pub(crate) fn check_length(l: f64) -> Result<f64> {
    if l > 0.0 && l.is_finite() {
        Ok(l)
    } else {
        Err(Error::NonPositiveLength(l))
    }
}

pub(crate) fn check_radius(r: f64) -> Result<f64> {
    // NaN also lands here
    if r >= 0.0 {
        Ok(r)
    } else {
        Err(Error::NegativeRadius(r))
    }
}

pub(crate) fn check_positive(name: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonPositiveInput { name, value })
    }
}
