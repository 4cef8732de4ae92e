//! Physical constants, the two supported unit presets, and the natural
//! scales of the Schrödinger–Newton equation.
//!
//! SI values are CODATA 2018. The model is non-relativistic: the Compton
//! wavelength is taken as `ħ/m` without `c`, and `c` is only consulted for the
//! relativistic Unruh comparison temperature.

use serde::Serialize;

use crate::error::{check_mass, Result};
use crate::wavepacket::ParticleSpec;

/// CODATA 2018 reduced Planck constant [J·s].
pub const HBAR_SI: f64 = 1.054_571_817e-34;
/// CODATA 2018 Newtonian constant of gravitation [m³·kg⁻¹·s⁻²].
pub const G_SI: f64 = 6.674_30e-11;
/// Boltzmann constant, exact in the 2019 SI [J·K⁻¹].
pub const KB_SI: f64 = 1.380_649e-23;
/// Speed of light in vacuum, exact [m·s⁻¹].
pub const C_SI: f64 = 299_792_458.0;
/// Planck mass `sqrt(ħc/G)` [kg], CODATA 2018 rounded value.
pub const PLANCK_MASS_SI: f64 = 2.176_434e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalConstants {
    pub hbar: f64,
    #[serde(rename = "G")]
    pub g: f64,
    #[serde(rename = "kB")]
    pub kb: f64,
    pub c: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UnitKind {
    Si,
    NaturalTest,
}

impl UnitKind {
    pub fn as_str(self) -> &'static str {
        match self {
            UnitKind::Si => "si",
            UnitKind::NaturalTest => "natural",
        }
    }
}

/// A unit preset together with the constants it implies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UnitSystem {
    pub kind: UnitKind,
    pub constants: PhysicalConstants,
}

impl UnitSystem {
    pub fn si() -> Self {
        make_units(UnitKind::Si)
    }

    /// `ħ = G = k_B = 1`. The speed of light defaults to 1 as well and can be
    /// overridden with [`UnitSystem::with_speed_of_light`].
    pub fn natural() -> Self {
        make_units(UnitKind::NaturalTest)
    }

    /// Same preset with a different `c`; only the relativistic Unruh
    /// comparison depends on it.
    pub fn with_speed_of_light(self, c: f64) -> Self {
        let mut out = self;
        out.constants.c = c;
        out
    }

    pub fn hbar(&self) -> f64 {
        self.constants.hbar
    }

    pub fn g(&self) -> f64 {
        self.constants.g
    }

    pub fn kb(&self) -> f64 {
        self.constants.kb
    }

    pub fn c(&self) -> f64 {
        self.constants.c
    }
}

pub fn make_units(kind: UnitKind) -> UnitSystem {
    let constants = match kind {
        UnitKind::Si => PhysicalConstants {
            hbar: HBAR_SI,
            g: G_SI,
            kb: KB_SI,
            c: C_SI,
        },
        UnitKind::NaturalTest => PhysicalConstants {
            hbar: 1.0,
            g: 1.0,
            kb: 1.0,
            c: 1.0,
        },
    };
    UnitSystem { kind, constants }
}

/// Which convention produced a derived number.
///
/// `PaperOrderOfMagnitude` drops the O(1) prefactors (`≈` relations);
/// `ExactPrefactor` keeps every constant that the Gaussian integrals produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PrefactorMode {
    PaperOrderOfMagnitude,
    ExactPrefactor,
}

impl PrefactorMode {
    pub fn as_str(self) -> &'static str {
        match self {
            PrefactorMode::PaperOrderOfMagnitude => "paper",
            PrefactorMode::ExactPrefactor => "exact",
        }
    }
}

/// Natural scales of the single-particle Schrödinger–Newton equation.
///
/// With `x = L·x̃`, `t = T·t̃` and `ψ = L^{-3/2} ψ̃` the equation becomes
/// `i ∂ψ̃/∂t̃ = -½∇̃²ψ̃ - ∫|ψ̃'|²/|x̃ - x̃'| d³x̃' ψ̃`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScaleFactors {
    /// `ħ²/(G m³)`
    pub length: f64,
    /// `ħ³/(G² m⁵)`
    pub time: f64,
    /// `G² m⁵/ħ²`
    pub energy: f64,
}

impl ScaleFactors {
    pub fn to_dimensionless_length(&self, x: f64) -> f64 {
        x / self.length
    }

    pub fn from_dimensionless_length(&self, x: f64) -> f64 {
        x * self.length
    }

    pub fn to_dimensionless_time(&self, t: f64) -> f64 {
        t / self.time
    }

    pub fn from_dimensionless_time(&self, t: f64) -> f64 {
        t * self.time
    }

    pub fn to_dimensionless_energy(&self, e: f64) -> f64 {
        e / self.energy
    }

    pub fn from_dimensionless_energy(&self, e: f64) -> f64 {
        e * self.energy
    }
}

pub fn sn_dimensionless_scale(p: &ParticleSpec, u: &UnitSystem) -> Result<ScaleFactors> {
    sn_scale_for_mass(p.mass, u)
}

pub(crate) fn sn_scale_for_mass(m: f64, u: &UnitSystem) -> Result<ScaleFactors> {
    let m = check_mass(m)?;
    let (hbar, g) = (u.hbar(), u.g());
    let length = hbar * hbar / (g * m.powi(3));
    let energy = g * m * m / length;
    let time = hbar / energy;
    Ok(ScaleFactors {
        length,
        time,
        energy,
    })
}
