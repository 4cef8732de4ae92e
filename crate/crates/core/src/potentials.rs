//! Quantum potential, self-gravitational potential and the corresponding
//! radial forces for the unspread spherical Gaussian.
//!
//! Conventions: potentials are energies, forces carry an explicit radial sign
//! (outward positive). The self-gravitational potential is taken as
//! `U(r) = √(2/π)(Gm²/σ₀)(1 - e^{-r²/2σ₀²})`, i.e. zero at the centre and
//! increasing outward, so that `-dU/dr` points inward (attractive).

use std::f64::consts::{FRAC_2_PI, PI};

use serde::Serialize;

use crate::error::{check_radius, Result};
use crate::units::UnitSystem;
use crate::wavepacket::ParticleSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldKind {
    QuantumPotential,
    GravPotential,
    QuantumForce,
    GravForce,
}

/// One of the four radial profiles bound to a particle and unit system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadialField {
    pub kind: FieldKind,
    pub spec: ParticleSpec,
    pub units: UnitSystem,
}

impl RadialField {
    pub fn new(kind: FieldKind, spec: ParticleSpec, units: UnitSystem) -> Self {
        RadialField { kind, spec, units }
    }

    pub fn value_at(&self, r: f64) -> Result<f64> {
        let (s, u) = (&self.spec, &self.units);
        match self.kind {
            FieldKind::QuantumPotential => quantum_potential(s, r, u),
            FieldKind::GravPotential => grav_potential(s, r, u),
            FieldKind::QuantumForce => quantum_force(s, r, u),
            FieldKind::GravForce => grav_force(s, r, u),
        }
    }
}

/// `Q(r) = ħ²(6σ₀² - r²)/(8mσ₀⁴)`, i.e. `-ħ²∇²R/(2mR)` for the Gaussian.
pub fn quantum_potential(spec: &ParticleSpec, r: f64, u: &UnitSystem) -> Result<f64> {
    let r = check_radius(r)?;
    let s2 = spec.sigma0 * spec.sigma0;
    Ok(u.hbar() * u.hbar() * (6.0 * s2 - r * r) / (8.0 * spec.mass * s2 * s2))
}

/// Self-gravitational potential relative to the centre, `U(0) = 0`.
pub fn grav_potential(spec: &ParticleSpec, r: f64, u: &UnitSystem) -> Result<f64> {
    let r = check_radius(r)?;
    let x = r / spec.sigma0;
    Ok(grav_potential_scale(spec, u) * -(-0.5 * x * x).exp_m1())
}

/// The same potential measured from infinity, `U(r) - U(∞)`.
///
/// Differs from [`grav_potential`] only by a constant but keeps full relative
/// precision in the tail, where `U(r)` itself has saturated.
pub fn grav_potential_from_infinity(spec: &ParticleSpec, r: f64, u: &UnitSystem) -> Result<f64> {
    let r = check_radius(r)?;
    let x = r / spec.sigma0;
    Ok(-grav_potential_scale(spec, u) * (-0.5 * x * x).exp())
}

/// `U(∞) = √(2/π) Gm²/σ₀`.
pub fn grav_potential_scale(spec: &ParticleSpec, u: &UnitSystem) -> f64 {
    FRAC_2_PI.sqrt() * u.g() * spec.mass * spec.mass / spec.sigma0
}

/// Outward quantum force `-dQ/dr = ħ²r/(4mσ₀⁴)`.
pub fn quantum_force(spec: &ParticleSpec, r: f64, u: &UnitSystem) -> Result<f64> {
    let r = check_radius(r)?;
    Ok(u.hbar() * u.hbar() * r / (4.0 * spec.mass * spec.sigma0.powi(4)))
}

/// Inward self-gravitational force `-dU/dr = -√2 Gm² r e^{-r²/2σ₀²}/(√π σ₀³)`.
pub fn grav_force(spec: &ParticleSpec, r: f64, u: &UnitSystem) -> Result<f64> {
    let r = check_radius(r)?;
    let s = spec.sigma0;
    Ok(-(2.0 / PI).sqrt() * u.g() * spec.mass * spec.mass * r * (-r * r / (2.0 * s * s)).exp()
        / s.powi(3))
}
