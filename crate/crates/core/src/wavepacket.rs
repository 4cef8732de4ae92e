//! Gaussian packet of a particle released from rest in a homogeneous field.
//!
//! The packet is centred at `-½ g t²` and spreads exactly like a free packet:
//! `σ(t) = σ₀ sqrt(1 + ħ²t²/(4m²σ₀⁴))`. Wave-function values are carried in
//! polar form `R e^{iS/ħ}`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{check_length, check_mass, check_radius, Result};
use crate::units::UnitSystem;
use crate::vec3::Vec3;

/// Mass and initial packet width, the two free physical inputs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParticleSpec {
    pub mass: f64,
    pub sigma0: f64,
}

impl ParticleSpec {
    pub fn new(mass: f64, sigma0: f64) -> Result<Self> {
        Ok(ParticleSpec {
            mass: check_mass(mass)?,
            sigma0: check_length(sigma0)?,
        })
    }

    /// Natural spreading time `2mσ₀²/ħ`; the width has grown by `√2` after it.
    pub fn spreading_time(&self, u: &UnitSystem) -> f64 {
        2.0 * self.mass * self.sigma0 * self.sigma0 / u.hbar()
    }
}

/// The packet at time `t` in the field `g`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PacketState {
    pub spec: ParticleSpec,
    pub t: f64,
    pub g: Vec3,
    pub sigma_t: f64,
    pub hbar: f64,
}

impl PacketState {
    pub fn new(spec: ParticleSpec, t: f64, g: Vec3, u: &UnitSystem) -> Self {
        PacketState {
            spec,
            t,
            g,
            sigma_t: width_at(&spec, t, u),
            hbar: u.hbar(),
        }
    }

    /// Packet centre, which falls classically.
    pub fn center(&self) -> Vec3 {
        -0.5 * self.t * self.t * self.g
    }

    /// `ħt/(2mσ₀²)`
    fn spread_parameter(&self) -> f64 {
        let s = &self.spec;
        self.hbar * self.t / (2.0 * s.mass * s.sigma0 * s.sigma0)
    }
}

/// Polar form of a wave-function value: `ψ = modulus · e^{i·phase}`, with
/// `phase = S/ħ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexAmplitude {
    pub modulus: f64,
    pub phase: f64,
}

impl ComplexAmplitude {
    pub fn new(modulus: f64, phase: f64) -> Self {
        debug_assert!(modulus >= 0.0);
        ComplexAmplitude { modulus, phase }
    }

    pub fn to_complex(self) -> num_complex::Complex64 {
        num_complex::Complex64::from_polar(self.modulus, self.phase)
    }

    pub fn with_extra_phase(self, dphase: f64) -> Self {
        ComplexAmplitude {
            modulus: self.modulus,
            phase: self.phase + dphase,
        }
    }
}

pub fn width_at(spec: &ParticleSpec, t: f64, u: &UnitSystem) -> f64 {
    let a = u.hbar() * t / (2.0 * spec.mass * spec.sigma0 * spec.sigma0);
    spec.sigma0 * a.hypot(1.0)
}

/// Real amplitude `R = (2πσ²)^{-3/4} exp(-(x + ½gt²)²/(4σ²))`.
pub fn amplitude(state: &PacketState, x: Vec3) -> f64 {
    let y = x - state.center();
    gaussian_amplitude(state.sigma_t, y.norm_squared())
}

fn gaussian_amplitude(sigma: f64, r2: f64) -> f64 {
    (2.0 * PI * sigma * sigma).powf(-0.75) * (-r2 / (4.0 * sigma * sigma)).exp()
}

/// `ρ(r) = R(r)²` of the unspread packet, `R(r) = (2πσ₀²)^{-3/4} e^{-r²/4σ₀²}`.
pub fn density_spherical(spec: &ParticleSpec, r: f64) -> Result<f64> {
    let r = check_radius(r)?;
    Ok(density_unchecked(spec.sigma0, r))
}

pub(crate) fn density_unchecked(sigma0: f64, r: f64) -> f64 {
    let s2 = sigma0 * sigma0;
    (2.0 * PI * s2).powf(-1.5) * (-r * r / (2.0 * s2)).exp()
}

/// Phase `S/ħ` of the falling packet.
///
/// This is the phase of
/// `(2πs²)^{-3/4} exp(-(x+½gt²)²/(4σ₀s) - (im/ħ)(g·x t + g²t³/6))`
/// with `s = σ₀(1 + iħt/(2mσ₀²))`, which solves the Schrödinger equation
/// with potential `m g·x`.
pub fn phase(state: &PacketState, x: Vec3) -> f64 {
    let a = state.spread_parameter();
    let y = x - state.center();
    let m_over_hbar = state.spec.mass / state.hbar;
    let t = state.t;
    -1.5 * a.atan() + a * y.norm_squared() / (4.0 * state.sigma_t * state.sigma_t)
        - m_over_hbar * (state.g.dot(x) * t + state.g.norm_squared() * t.powi(3) / 6.0)
}

/// Phase term taken literally from the frequently quoted form
/// `(im/ħ)(x² - g·x t - (1/6) m g² t³)` plus the spreading phase.
///
/// Kept only so that tests can show it is not the phase of a solution: its
/// gradient does not give the classical centre motion.
pub fn phase_quoted_form(state: &PacketState, x: Vec3) -> f64 {
    let a = state.spread_parameter();
    let y = x - state.center();
    let m = state.spec.mass;
    let t = state.t;
    -1.5 * a.atan()
        + a * y.norm_squared() / (4.0 * state.sigma_t * state.sigma_t)
        + (m / state.hbar)
            * (x.norm_squared() - state.g.dot(x) * t - m * state.g.norm_squared() * t.powi(3) / 6.0)
}

pub fn psi(state: &PacketState, x: Vec3) -> ComplexAmplitude {
    ComplexAmplitude::new(amplitude(state, x), phase(state, x))
}

/// Bohmian guidance velocity `∇S/m`, in closed form:
/// `v = -g t + (x + ½gt²)·σ̇/σ`.
pub fn guidance_velocity(state: &PacketState, x: Vec3) -> Vec3 {
    let y = x - state.center();
    let s = &state.spec;
    // σ̇/σ = ħ²t / (4m²σ₀²σ²)
    let dilation = state.hbar * state.hbar * state.t
        / (4.0 * s.mass * s.mass * s.sigma0 * s.sigma0 * state.sigma_t * state.sigma_t);
    y * dilation - state.g * state.t
}
