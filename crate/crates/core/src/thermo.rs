//! Reduction temperatures from `k_B T = m ū²` with one radial degree of
//! freedom, and the Unruh and Hawking-order comparison values.

use serde::Serialize;

use crate::ensemble::one_sigma_probability;
use crate::error::{check_length, check_mass, check_positive, Result};
use crate::quadrature::QuadratureSpec;
use crate::units::{PrefactorMode, UnitKind, UnitSystem};

/// Width assumption behind a reported temperature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WidthAssumption {
    /// Caller-supplied `σ₀`.
    Given,
    /// `σ₀ = λ_C = ħ/m`.
    ComptonWavelength,
    /// `σ₀ = 2Gm` with `|g| = Gm/σ₀²`.
    SchwarzschildRadius,
}

impl WidthAssumption {
    pub fn as_str(self) -> &'static str {
        match self {
            WidthAssumption::Given => "given",
            WidthAssumption::ComptonWavelength => "compton_wavelength",
            WidthAssumption::SchwarzschildRadius => "schwarzschild_radius",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TemperatureReport {
    pub t_reduction: f64,
    /// `ħ|g|/k_B`
    pub t_unruh_nonrel: f64,
    /// `ħ|g|/(2πc k_B)`
    pub t_unruh_rel: f64,
    /// `ħ|g|/(k_B c)`, the variant obtained from `λ_C = ħ/(mc)`.
    pub t_unruh_compton_c: f64,
    /// `ħ/(k_B G m)`
    pub t_hawking_order: f64,
    pub mode: PrefactorMode,
    pub assumption: WidthAssumption,
    pub units: UnitKind,
    pub mass: f64,
    pub g: f64,
    pub sigma0: f64,
}

/// `k_B T = m ū²` with `ū² = 2|g|σ₀`; exact mode weights `ū²` by the
/// probability inside one width.
pub fn ensemble_temperature(m: f64, g: f64, sigma0: f64, u: &UnitSystem, mode: PrefactorMode) -> Result<f64> {
    let m = check_mass(m)?;
    if !(g >= 0.0) || !g.is_finite() {
        return Err(crate::Error::NonPositiveInput { name: "g", value: g });
    }
    let s = check_length(sigma0)?;
    let t = 2.0 * m * g * s / u.kb();
    match mode {
        PrefactorMode::PaperOrderOfMagnitude => Ok(t),
        PrefactorMode::ExactPrefactor => Ok(t * one_sigma_probability(&QuadratureSpec::default())?),
    }
}

/// Temperature at `σ₀ = ħ/m`: `ħ|g|/k_B` (paper) or `2ħ|g|/k_B` (exact).
pub fn reduction_temperature_compton(m: f64, g: f64, u: &UnitSystem, mode: PrefactorMode) -> Result<f64> {
    check_mass(m)?;
    let g = check_positive("g", g)?;
    let t = u.hbar() * g / u.kb();
    Ok(match mode {
        PrefactorMode::PaperOrderOfMagnitude => t,
        PrefactorMode::ExactPrefactor => 2.0 * t,
    })
}

/// Compton temperature with `σ₀ = 2Gm`, `|g| = Gm/σ₀² = 1/(4Gm)`.
///
/// Paper mode reports `ħ/(k_B G m)`; exact mode keeps the factors,
/// `2ħ|g|/k_B = ħ/(2k_B G m)`.
pub fn reduction_temperature_schwarzschild(m: f64, u: &UnitSystem, mode: PrefactorMode) -> Result<f64> {
    let m = check_mass(m)?;
    match mode {
        PrefactorMode::PaperOrderOfMagnitude => Ok(u.hbar() / (u.kb() * u.g() * m)),
        PrefactorMode::ExactPrefactor => {
            reduction_temperature_compton(m, schwarzschild_field(m, u), u, mode)
        }
    }
}

/// `|g| = Gm/(2Gm)²`
pub fn schwarzschild_field(m: f64, u: &UnitSystem) -> f64 {
    1.0 / (4.0 * u.g() * m)
}

pub fn unruh_relativistic(g: f64, u: &UnitSystem) -> f64 {
    u.hbar() * g / (2.0 * std::f64::consts::PI * u.c() * u.kb())
}

fn comparisons(m: f64, g: f64, u: &UnitSystem) -> (f64, f64, f64, f64) {
    let nonrel = u.hbar() * g / u.kb();
    (nonrel, unruh_relativistic(g, u), nonrel / u.c(), u.hbar() / (u.kb() * u.g() * m))
}

/// Report for a caller-supplied `σ₀`.
pub fn ensemble_report(m: f64, g: f64, sigma0: f64, u: &UnitSystem, mode: PrefactorMode) -> Result<TemperatureReport> {
    let t_reduction = ensemble_temperature(m, g, sigma0, u, mode)?;
    let (a, b, c, d) = comparisons(m, g, u);
    Ok(TemperatureReport {
        t_reduction,
        t_unruh_nonrel: a,
        t_unruh_rel: b,
        t_unruh_compton_c: c,
        t_hawking_order: d,
        mode,
        assumption: WidthAssumption::Given,
        units: u.kind,
        mass: m,
        g,
        sigma0,
    })
}

pub fn compton_report(m: f64, g: f64, u: &UnitSystem, mode: PrefactorMode) -> Result<TemperatureReport> {
    let t_reduction = reduction_temperature_compton(m, g, u, mode)?;
    let (a, b, c, d) = comparisons(m, g, u);
    Ok(TemperatureReport {
        t_reduction,
        t_unruh_nonrel: a,
        t_unruh_rel: b,
        t_unruh_compton_c: c,
        t_hawking_order: d,
        mode,
        assumption: WidthAssumption::ComptonWavelength,
        units: u.kind,
        mass: m,
        g,
        sigma0: u.hbar() / m,
    })
}

pub fn schwarzschild_report(m: f64, u: &UnitSystem, mode: PrefactorMode) -> Result<TemperatureReport> {
    let t_reduction = reduction_temperature_schwarzschild(m, u, mode)?;
    let g = schwarzschild_field(m, u);
    let (a, b, c, d) = comparisons(m, g, u);
    Ok(TemperatureReport {
        t_reduction,
        t_unruh_nonrel: a,
        t_unruh_rel: b,
        t_unruh_compton_c: c,
        t_hawking_order: d,
        mode,
        assumption: WidthAssumption::SchwarzschildRadius,
        units: u.kind,
        mass: m,
        g,
        sigma0: 2.0 * u.g() * m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::PLANCK_MASS_SI;

    const PAPER: PrefactorMode = PrefactorMode::PaperOrderOfMagnitude;
    const EXACT: PrefactorMode = PrefactorMode::ExactPrefactor;

    #[test]
    fn ensemble_values() {
        let u = UnitSystem::natural();
        assert_eq!(ensemble_temperature(1.0, 1.0, 1.0, &u, PAPER).unwrap(), 2.0);
        let e = ensemble_temperature(1.0, 1.0, 1.0, &u, EXACT).unwrap();
        assert!((e - 2.0 * 0.198748).abs() < 2e-6);
        assert_eq!(ensemble_temperature(1.0, 0.0, 1.0, &u, PAPER).unwrap(), 0.0);
        assert!(ensemble_temperature(1.0, -1.0, 1.0, &u, PAPER).is_err());
        assert!(ensemble_temperature(1.0, 1.0, 0.0, &u, PAPER).is_err());
    }

    #[test]
    fn compton_values() {
        let si = UnitSystem::si();
        let t = reduction_temperature_compton(1.0, 9.8, &si, PAPER).unwrap();
        assert!((t / 7.48e-11 - 1.0).abs() < 5e-3);
        assert!((unruh_relativistic(9.8, &si) / 3.97e-20 - 1.0).abs() < 5e-3);
        assert_eq!(reduction_temperature_compton(1.0, 1.0, &UnitSystem::natural(), PAPER).unwrap(), 1.0);
    }

    #[test]
    fn schwarzschild_values() {
        let si = UnitSystem::si();
        let t = reduction_temperature_schwarzschild(PLANCK_MASS_SI, &si, PAPER).unwrap();
        assert!((t / 5.26e6 - 1.0).abs() < 5e-3);
        let u = UnitSystem::natural();
        assert_eq!(reduction_temperature_schwarzschild(1.0, &u, PAPER).unwrap(), 1.0);
        assert_eq!(reduction_temperature_schwarzschild(1.0, &u, EXACT).unwrap(), 0.5);
        let r = reduction_temperature_schwarzschild(10.0, &u, PAPER).unwrap();
        assert!((r - 0.1).abs() < 1e-16);
    }

    #[test]
    fn reports_carry_assumptions() {
        let u = UnitSystem::natural();
        let r = compton_report(2.0, 3.0, &u, EXACT).unwrap();
        assert_eq!(r.assumption, WidthAssumption::ComptonWavelength);
        assert_eq!(r.sigma0, 0.5);
        let r = schwarzschild_report(2.0, &u, PAPER).unwrap();
        assert_eq!(r.sigma0, 4.0);
        assert_eq!(r.g, 1.0 / 8.0);
    }
}
