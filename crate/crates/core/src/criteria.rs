//! Critical width and mass, the averaged force balance, and regime
//! classification.
//!
//! The paper-mode critical width is `ħ²/(Gm³)`. Balancing the averaged
//! accelerations with their Gaussian prefactors gives the larger width
//! `√(π/2)·ħ²/(Gm³) ≈ 1.25331·ħ²/(Gm³)`.

use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use crate::ensemble::{mean_grav_acceleration, mean_quantum_acceleration};
use crate::error::{check_length, check_mass, Error, Result};
use crate::quadrature::QuadratureSpec;
use crate::solve::find_root;
use crate::units::{PrefactorMode, UnitSystem};
use crate::wavepacket::ParticleSpec;

/// Default half-width of the transition band in `m/m_c`.
pub const DEFAULT_TRANSITION_BAND: f64 = 0.05;

/// Ratio of the exact-prefactor critical width to the paper-mode one.
pub fn exact_width_factor() -> f64 {
    FRAC_PI_2.sqrt()
}

fn width_factor(mode: PrefactorMode) -> f64 {
    match mode {
        PrefactorMode::PaperOrderOfMagnitude => 1.0,
        PrefactorMode::ExactPrefactor => exact_width_factor(),
    }
}

pub fn critical_width(m: f64, u: &UnitSystem, mode: PrefactorMode) -> Result<f64> {
    let m = check_mass(m)?;
    Ok(width_factor(mode) * u.hbar() * u.hbar() / (u.g() * m.powi(3)))
}

pub fn critical_mass(sigma0: f64, u: &UnitSystem, mode: PrefactorMode) -> Result<f64> {
    let s = check_length(sigma0)?;
    Ok((width_factor(mode) * u.hbar() * u.hbar() / (u.g() * s)).cbrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Regime {
    QuantumDominant,
    Transition,
    GravityDominant,
}

impl Regime {
    pub fn from_ratio(ratio: f64, band: f64) -> Regime {
        if (ratio - 1.0).abs() <= band {
            Regime::Transition
        } else if ratio > 1.0 {
            Regime::GravityDominant
        } else {
            Regime::QuantumDominant
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Regime::QuantumDominant => "QuantumDominant",
            Regime::Transition => "Transition",
            Regime::GravityDominant => "GravityDominant",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegimeReport {
    /// Critical mass for the packet's `σ₀`.
    pub m_c: f64,
    /// Critical width for the particle's mass.
    pub sigma_c: f64,
    pub regime: Regime,
    /// `m/m_c`
    pub ratio: f64,
    pub transition_band: f64,
    pub mode: PrefactorMode,
}

pub fn classify(spec: &ParticleSpec, u: &UnitSystem, mode: PrefactorMode) -> RegimeReport {
    classify_with_band(spec, u, mode, DEFAULT_TRANSITION_BAND)
}

pub fn classify_with_band(
    spec: &ParticleSpec,
    u: &UnitSystem,
    mode: PrefactorMode,
    band: f64,
) -> RegimeReport {
    // spec is validated on construction, so these cannot fail
    let m_c = critical_mass(spec.sigma0, u, mode).expect("validated sigma0");
    let sigma_c = critical_width(spec.mass, u, mode).expect("validated mass");
    let ratio = spec.mass / m_c;
    RegimeReport {
        m_c,
        sigma_c,
        regime: Regime::from_ratio(ratio, band),
        ratio,
        transition_band: band,
        mode,
    }
}

/// Width at which the quadrature-averaged quantum and gravitational
/// accelerations balance.
///
/// Searches `σ₀ ∈ [1e-3, 1e3]·ħ²/(Gm³)` to `1e-10` relative.
pub fn balance_solve(m: f64, u: &UnitSystem) -> Result<f64> {
    balance_solve_with(m, u, &QuadratureSpec::default())
}

pub fn balance_solve_with(m: f64, u: &UnitSystem, qspec: &QuadratureSpec) -> Result<f64> {
    let scale = critical_width(m, u, PrefactorMode::PaperOrderOfMagnitude)?;
    let (lo, hi) = (1e-3 * scale, 1e3 * scale);
    let imbalance = |sigma: f64| -> Result<f64> {
        let spec = ParticleSpec::new(m, sigma)?;
        let q = mean_quantum_acceleration(&spec, u, qspec)?.numeric;
        let g = mean_grav_acceleration(&spec, u, qspec)?.numeric;
        Ok((q / g).ln())
    };
    find_root(imbalance, lo, hi, 1e-10).map_err(|e| match e {
        Error::BracketFailure { .. } => Error::BracketFailure { lo, hi },
        other => other,
    })
}
