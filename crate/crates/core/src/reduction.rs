//! Summary of the collapse criterion and both reduction-time routes for one
//! particle.

use serde::Serialize;

use crate::criteria::{classify_with_band, Regime};
use crate::ensemble::mean_accelerations_closed_form;
use crate::error::Result;
use crate::frames::uncertainty_reduction_time;
use crate::trajectories::{fall_time, planck_scaled_time};
use crate::units::{PrefactorMode, UnitSystem};
use crate::wavepacket::ParticleSpec;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReductionEstimate {
    pub spec: ParticleSpec,
    pub m_c: f64,
    pub sigma_c: f64,
    pub regime: Regime,
    pub ratio: f64,
    /// Kinematic route, time to fall through one width.
    pub tau_fall: f64,
    /// Uncertainty route `(ħ/(m g²))^{1/3}` with the mean self-gravity.
    pub tau_uncertainty: f64,
    /// `ħ³/(G²m⁵)`; both routes reduce to it at the critical width.
    pub tau_critical: f64,
    /// Mean self-gravitational acceleration used by both routes.
    pub g_mean: f64,
    pub mode: PrefactorMode,
}

pub fn reduction_estimate(
    spec: &ParticleSpec,
    u: &UnitSystem,
    mode: PrefactorMode,
    band: f64,
) -> Result<ReductionEstimate> {
    let rep = classify_with_band(spec, u, mode, band);
    let g_mean = mean_accelerations_closed_form(spec, u, mode).1;
    Ok(ReductionEstimate {
        spec: *spec,
        m_c: rep.m_c,
        sigma_c: rep.sigma_c,
        regime: rep.regime,
        ratio: rep.ratio,
        tau_fall: fall_time(spec, u, mode),
        tau_uncertainty: uncertainty_reduction_time(spec.mass, g_mean, u)?,
        tau_critical: planck_scaled_time(spec.mass, u)?,
        g_mean,
        mode,
    })
}
