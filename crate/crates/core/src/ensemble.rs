//! Ensemble averages over the Gaussian probability distribution.
//!
//! Averaged accelerations are computed by radial quadrature of
//! `(1/m)∫ρ|f| dv` and carried next to their closed forms
//! `√(2/π)ħ²/(2m²σ₀³)` (quantum) and `Gm/(πσ₀²)` (gravity). The frozen width
//! `σ = σ₀` is assumed throughout.

use std::f64::consts::{FRAC_2_PI, PI};

use serde::Serialize;

use crate::error::{check_radius, Result};
use crate::potentials;
use crate::quadrature::{integrate, integrate_radial, QuadratureSpec};
use crate::units::{PrefactorMode, UnitSystem};
use crate::wavepacket::{density_unchecked, ParticleSpec};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanAcceleration {
    /// Quadrature value.
    pub numeric: f64,
    pub closed_form: f64,
    pub abs_error: f64,
}

impl MeanAcceleration {
    pub fn rel_diff(&self) -> f64 {
        (self.numeric - self.closed_form).abs() / self.closed_form.abs()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AveragedForces {
    pub mean_quantum_accel: f64,
    pub mean_grav_accel: f64,
    pub closed_form_quantum: f64,
    pub closed_form_grav: f64,
}

impl AveragedForces {
    /// Largest relative disagreement between quadrature and closed form.
    pub fn max_rel_diff(&self) -> f64 {
        let dq = (self.mean_quantum_accel - self.closed_form_quantum).abs() / self.closed_form_quantum;
        let dg = (self.mean_grav_accel - self.closed_form_grav).abs() / self.closed_form_grav;
        dq.max(dg)
    }
}

/// Closed-form mean accelerations `(|ā_q|, |ḡ|)` in the requested convention.
///
/// Paper mode drops the Gaussian prefactors: `ħ²/(m²σ₀³)` and `Gm/σ₀²`.
pub fn mean_accelerations_closed_form(
    spec: &ParticleSpec,
    u: &UnitSystem,
    mode: PrefactorMode,
) -> (f64, f64) {
    let (m, s) = (spec.mass, spec.sigma0);
    let q = u.hbar() * u.hbar() / (m * m * s.powi(3));
    let g = u.g() * m / (s * s);
    match mode {
        PrefactorMode::PaperOrderOfMagnitude => (q, g),
        PrefactorMode::ExactPrefactor => (0.5 * FRAC_2_PI.sqrt() * q, g / PI),
    }
}

/// `(1/m)∫ρ f_r dv` for a signed radial force profile.
fn averaged_radial<F: Fn(f64) -> f64>(
    spec: &ParticleSpec,
    force: F,
    qspec: &QuadratureSpec,
) -> Result<crate::quadrature::Estimate> {
    let s = spec.sigma0;
    let m = spec.mass;
    let est = integrate_radial(
        |r| 4.0 * PI * r * r * density_unchecked(s, r) * force(r) / m,
        s,
        qspec,
    )?;
    Ok(est)
}

/// Signed ensemble average of the radial quantum force divided by `m`
/// (outward, positive).
pub fn signed_mean_quantum_acceleration(
    spec: &ParticleSpec,
    u: &UnitSystem,
    qspec: &QuadratureSpec,
) -> Result<f64> {
    Ok(averaged_radial(spec, |r| potentials::quantum_force(spec, r, u).unwrap_or(f64::NAN), qspec)?.value)
}

/// Signed ensemble average of the radial gravitational force divided by `m`
/// (inward, negative).
pub fn signed_mean_grav_acceleration(
    spec: &ParticleSpec,
    u: &UnitSystem,
    qspec: &QuadratureSpec,
) -> Result<f64> {
    Ok(averaged_radial(spec, |r| potentials::grav_force(spec, r, u).unwrap_or(f64::NAN), qspec)?.value)
}

pub fn mean_quantum_acceleration(
    spec: &ParticleSpec,
    u: &UnitSystem,
    qspec: &QuadratureSpec,
) -> Result<MeanAcceleration> {
    let est = averaged_radial(
        spec,
        |r| potentials::quantum_force(spec, r, u).map_or(f64::NAN, f64::abs),
        qspec,
    )?;
    Ok(MeanAcceleration {
        numeric: est.value,
        closed_form: mean_accelerations_closed_form(spec, u, PrefactorMode::ExactPrefactor).0,
        abs_error: est.abs_error,
    })
}

pub fn mean_grav_acceleration(
    spec: &ParticleSpec,
    u: &UnitSystem,
    qspec: &QuadratureSpec,
) -> Result<MeanAcceleration> {
    let est = averaged_radial(
        spec,
        |r| potentials::grav_force(spec, r, u).map_or(f64::NAN, f64::abs),
        qspec,
    )?;
    Ok(MeanAcceleration {
        numeric: est.value,
        closed_form: mean_accelerations_closed_form(spec, u, PrefactorMode::ExactPrefactor).1,
        abs_error: est.abs_error,
    })
}

pub fn averaged_forces(
    spec: &ParticleSpec,
    u: &UnitSystem,
    qspec: &QuadratureSpec,
) -> Result<AveragedForces> {
    let q = mean_quantum_acceleration(spec, u, qspec)?;
    let g = mean_grav_acceleration(spec, u, qspec)?;
    Ok(AveragedForces {
        mean_quantum_accel: q.numeric,
        mean_grav_accel: g.numeric,
        closed_form_quantum: q.closed_form,
        closed_form_grav: g.closed_form,
    })
}

/// Probability of finding the particle within radius `radius`,
/// `∫₀^R ρ 4πr² dr`.
pub fn enclosed_probability(spec: &ParticleSpec, radius: f64, qspec: &QuadratureSpec) -> Result<f64> {
    let radius = check_radius(radius)?;
    qspec.validate()?;
    let s = spec.sigma0;
    let est = integrate(|r| 4.0 * PI * r * r * density_unchecked(s, r), 0.0, radius, qspec)?;
    Ok(est.value)
}

/// Fraction of the ensemble inside one width, `∫₀^{σ₀} ρ dv ≈ 0.198748`.
///
/// Independent of `m` and `σ₀`.
pub fn one_sigma_probability(qspec: &QuadratureSpec) -> Result<f64> {
    let unit = ParticleSpec { mass: 1.0, sigma0: 1.0 };
    enclosed_probability(&unit, 1.0, qspec)
}

/// Mean-square ensemble velocity after falling for `tau` under `g`.
///
/// Paper mode: `g²τ²`. Exact mode keeps the enclosed-probability weight of
/// the falling shell: `g²τ²·∫₀^{σ₀}ρ dv`.
pub fn mean_square_velocity(
    g: f64,
    tau: f64,
    mode: PrefactorMode,
    qspec: &QuadratureSpec,
) -> Result<f64> {
    crate::error::check_radius(tau).map_err(|_| crate::Error::NonPositiveInput {
        name: "tau",
        value: tau,
    })?;
    let base = g * g * tau * tau;
    match mode {
        PrefactorMode::PaperOrderOfMagnitude => Ok(base),
        PrefactorMode::ExactPrefactor => Ok(base * one_sigma_probability(qspec)?),
    }
}

/// Pointwise fields at `r` together with the ensemble averages.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ForceReport {
    pub r: f64,
    pub quantum_potential: f64,
    pub grav_potential: f64,
    pub quantum_force: f64,
    pub grav_force: f64,
    pub averaged: AveragedForces,
    /// Mean accelerations in the requested convention.
    pub mode_quantum_accel: f64,
    pub mode_grav_accel: f64,
    pub mode: PrefactorMode,
}

pub fn force_report(
    spec: &ParticleSpec,
    r: f64,
    u: &UnitSystem,
    mode: PrefactorMode,
    qspec: &QuadratureSpec,
) -> Result<ForceReport> {
    let averaged = averaged_forces(spec, u, qspec)?;
    let (mq, mg) = mean_accelerations_closed_form(spec, u, mode);
    Ok(ForceReport {
        r,
        quantum_potential: potentials::quantum_potential(spec, r, u)?,
        grav_potential: potentials::grav_potential(spec, r, u)?,
        quantum_force: potentials::quantum_force(spec, r, u)?,
        grav_force: potentials::grav_force(spec, r, u)?,
        averaged,
        mode_quantum_accel: mq,
        mode_grav_accel: mg,
        mode,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> (ParticleSpec, UnitSystem, QuadratureSpec) {
        (
            ParticleSpec::new(1.0, 1.0).unwrap(),
            UnitSystem::natural(),
            QuadratureSpec::default(),
        )
    }

    #[test]
    fn mean_quantum_unit_values() {
        let (s, u, q) = unit();
        let a = mean_quantum_acceleration(&s, &u, &q).unwrap();
        assert!((a.numeric - 0.398942).abs() < 1e-6);
        assert!((a.closed_form - 0.5 * (2.0 / PI).sqrt()).abs() < 1e-16);
        assert!(a.rel_diff() < 1e-9);
    }

    #[test]
    fn mean_grav_unit_values() {
        let (s, u, q) = unit();
        let a = mean_grav_acceleration(&s, &u, &q).unwrap();
        assert!((a.numeric - 0.318310).abs() < 1e-6);
        assert!((a.closed_form - 1.0 / PI).abs() < 1e-16);
        assert!(a.rel_diff() < 1e-9);
    }

    #[test]
    fn mass_and_width_scaling() {
        let (s, u, q) = unit();
        let base_q = mean_quantum_acceleration(&s, &u, &q).unwrap().numeric;
        let heavy = ParticleSpec::new(2.0, 1.0).unwrap();
        let q2 = mean_quantum_acceleration(&heavy, &u, &q).unwrap().numeric;
        assert!((q2 * 4.0 / base_q - 1.0).abs() < 1e-9);

        let base_g = mean_grav_acceleration(&s, &u, &q).unwrap().numeric;
        let wide = ParticleSpec::new(1.0, 2.0).unwrap();
        let g2 = mean_grav_acceleration(&wide, &u, &q).unwrap().numeric;
        assert!((g2 * 4.0 / base_g - 1.0).abs() < 1e-9);
    }

    #[test]
    fn magnitude_of_average_equals_average_of_magnitude() {
        let (s, u, q) = unit();
        let sq = signed_mean_quantum_acceleration(&s, &u, &q).unwrap();
        let sg = signed_mean_grav_acceleration(&s, &u, &q).unwrap();
        assert!(sq > 0.0 && sg < 0.0);
        let mq = mean_quantum_acceleration(&s, &u, &q).unwrap().numeric;
        let mg = mean_grav_acceleration(&s, &u, &q).unwrap().numeric;
        assert_eq!(sq.abs(), mq);
        assert_eq!(sg.abs(), mg);
    }

    #[test]
    fn enclosed_probability_edges() {
        let (s, _, q) = unit();
        assert_eq!(enclosed_probability(&s, 0.0, &q).unwrap(), 0.0);
        let full = enclosed_probability(&s, 12.0, &q).unwrap();
        assert!((full - 1.0).abs() < 1e-12);
        assert!(enclosed_probability(&s, -1.0, &q).is_err());
    }

    #[test]
    fn enclosed_probability_is_increasing() {
        let (s, _, q) = unit();
        let mut prev = 0.0;
        // beyond ~6σ₀ the increments fall below double precision
        for i in 1..25 {
            let p = enclosed_probability(&s, 0.25 * i as f64, &q).unwrap();
            assert!(p > prev);
            prev = p;
        }
    }

    #[test]
    fn mean_square_velocity_modes() {
        let q = QuadratureSpec::default();
        assert_eq!(mean_square_velocity(1.0, 0.0, PrefactorMode::PaperOrderOfMagnitude, &q).unwrap(), 0.0);
        assert_eq!(mean_square_velocity(1.0, 2.0, PrefactorMode::PaperOrderOfMagnitude, &q).unwrap(), 4.0);
        let exact = mean_square_velocity(1.0, 2.0, PrefactorMode::ExactPrefactor, &q).unwrap();
        assert!((exact - 4.0 * 0.198748043).abs() < 1e-8);
        assert!(mean_square_velocity(1.0, -1.0, PrefactorMode::ExactPrefactor, &q).is_err());
    }

    #[test]
    fn paper_mode_closed_forms() {
        let (s, u, _) = unit();
        let (q, g) = mean_accelerations_closed_form(&s, &u, PrefactorMode::PaperOrderOfMagnitude);
        assert_eq!((q, g), (1.0, 1.0));
    }
}
