//! Free-falling (Einsteinian) and laboratory (Newtonian) descriptions of a
//! particle in a homogeneous field, and the energy mismatch between them.
//!
//! The wave-function maps use the convention of the potential `-m g·x`, so a
//! packet at rest in the falling frame is centred at `+½gt²` in the lab.
//! With `x' = x - ½gt²`:
//!
//! * `φ(x', t) = exp(i(m/ħ)(g²t³/6 - g·x t)) ψ(x, t)`
//! * `ψ(x, t) = exp(i(m/ħ)(g²t³/3 + g·x' t)) φ(x', t)`
//!
//! The two cubic coefficients differ because one map is written in `x` and
//! the other in `x'`; the maps are exact inverses.

use serde::Serialize;

use crate::error::{check_mass, check_positive, Result};
use crate::units::UnitSystem;
use crate::vec3::Vec3;
use crate::wavepacket::ComplexAmplitude;

/// `x' = x - ½gt²`, `t' = t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrameTransform {
    pub g: Vec3,
    pub t: f64,
}

impl FrameTransform {
    pub fn new(g: Vec3, t: f64) -> Self {
        FrameTransform { g, t }
    }

    fn offset(&self) -> Vec3 {
        0.5 * self.t * self.t * self.g
    }

    pub fn forward(&self, x: Vec3) -> Vec3 {
        x - self.offset()
    }

    pub fn inverse(&self, x_prime: Vec3) -> Vec3 {
        x_prime + self.offset()
    }
}

pub fn to_accelerated_frame(x: Vec3, t: f64, g: Vec3) -> (Vec3, f64) {
    (FrameTransform::new(g, t).forward(x), t)
}

pub fn from_accelerated_frame(x_prime: Vec3, t_prime: f64, g: Vec3) -> (Vec3, f64) {
    (FrameTransform::new(g, t_prime).inverse(x_prime), t_prime)
}

/// Phase (in radians) added when going from `ψ(x, t)` to `φ(x', t)`.
pub fn to_einsteinian_phase(x: Vec3, t: f64, m: f64, g: Vec3, hbar: f64) -> f64 {
    (m / hbar) * (g.norm_squared() * t.powi(3) / 6.0 - g.dot(x) * t)
}

/// Phase (in radians) added when going from `φ(x', t)` back to `ψ(x, t)`.
pub fn to_newtonian_phase(x_prime: Vec3, t: f64, m: f64, g: Vec3, hbar: f64) -> f64 {
    (m / hbar) * (g.norm_squared() * t.powi(3) / 3.0 + g.dot(x_prime) * t)
}

/// `φ(x', t)` from the lab value `ψ(x, t)`.
pub fn einsteinian_from_newtonian(
    psi: ComplexAmplitude,
    x: Vec3,
    t: f64,
    m: f64,
    g: Vec3,
    u: &UnitSystem,
) -> ComplexAmplitude {
    psi.with_extra_phase(to_einsteinian_phase(x, t, m, g, u.hbar()))
}

/// `ψ(x, t)` from the falling-frame value `φ(x', t)`.
pub fn newtonian_from_einsteinian(
    phi: ComplexAmplitude,
    x_prime: Vec3,
    t: f64,
    m: f64,
    g: Vec3,
    u: &UnitSystem,
) -> ComplexAmplitude {
    phi.with_extra_phase(to_newtonian_phase(x_prime, t, m, g, u.hbar()))
}

/// Newtonian phase `S' = S - m g·x't' + ⅓ m g² t'³` with its two gravity
/// terms kept apart. All members are actions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseDecomposition {
    pub einsteinian_phase: f64,
    pub newtonian_phase: f64,
    /// `-m g·x' t'`
    pub linear_term: f64,
    /// `⅓ m g² t'³`
    pub cubic_term: f64,
}

fn gravity_terms(x_prime: Vec3, t_prime: f64, m: f64, g: Vec3) -> (f64, f64) {
    (-m * g.dot(x_prime) * t_prime, m * g.norm_squared() * t_prime.powi(3) / 3.0)
}

pub fn newtonian_phase(s: f64, x_prime: Vec3, t_prime: f64, m: f64, g: Vec3) -> PhaseDecomposition {
    let (linear_term, cubic_term) = gravity_terms(x_prime, t_prime, m, g);
    PhaseDecomposition {
        einsteinian_phase: s,
        newtonian_phase: s + linear_term + cubic_term,
        linear_term,
        cubic_term,
    }
}

/// Inverse of [`newtonian_phase`]: recover `S` from `S'`.
pub fn einsteinian_phase(s_prime: f64, x_prime: Vec3, t_prime: f64, m: f64, g: Vec3) -> PhaseDecomposition {
    let (linear_term, cubic_term) = gravity_terms(x_prime, t_prime, m, g);
    PhaseDecomposition {
        einsteinian_phase: s_prime - linear_term - cubic_term,
        newtonian_phase: s_prime,
        linear_term,
        cubic_term,
    }
}

/// Energies `E = -∂S/∂t'` and `E' = -∂S'/∂t'` seen by the two observers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyPair {
    pub e: f64,
    pub e_prime: f64,
    /// `E' - E`
    pub difference: f64,
}

/// Closed form on the falling path `x' = -½gt²`: `E' = E - (3/2)m g² t²`.
pub fn energy_pair(ds_dt: f64, m: f64, g: Vec3, t: f64) -> EnergyPair {
    let e = -ds_dt;
    let difference = energy_difference(m, g, t);
    EnergyPair {
        e,
        e_prime: e + difference,
        difference,
    }
}

/// `ℰ(t) = -(3/2) m g² t²`.
pub fn energy_difference(m: f64, g: Vec3, t: f64) -> f64 {
    -1.5 * m * g.norm_squared() * t * t
}

/// `E' - E = m g·x' - m g² t²` at a fixed `x'`.
pub fn energy_difference_at(x_prime: Vec3, m: f64, g: Vec3, t: f64) -> f64 {
    m * g.dot(x_prime) - m * g.norm_squared() * t * t
}

/// Energies by five-point central differences of `S(x', t')` and of the
/// Newtonian phase built from it, at fixed `x' = -½gt²`.
pub fn energy_pair_numeric<F>(s: F, m: f64, g: Vec3, t: f64, h: f64) -> EnergyPair
where
    F: Fn(Vec3, f64) -> f64,
{
    let x_prime = -0.5 * t * t * g;
    let s_prime = |tt: f64| newtonian_phase(s(x_prime, tt), x_prime, tt, m, g).newtonian_phase;
    let d = |f: &dyn Fn(f64) -> f64| {
        (f(t - 2.0 * h) - 8.0 * f(t - h) + 8.0 * f(t + h) - f(t + 2.0 * h)) / (12.0 * h)
    };
    let e = -d(&|tt| s(x_prime, tt));
    let e_prime = -d(&s_prime);
    EnergyPair {
        e,
        e_prime,
        difference: e_prime - e,
    }
}

/// `τ = (ħ/(m g²))^{1/3}`, from `|ℰ(τ)|τ ≈ ħ` with the prefactor dropped.
pub fn uncertainty_reduction_time(m: f64, g: f64, u: &UnitSystem) -> Result<f64> {
    let m = check_mass(m)?;
    let g = check_positive("g", g)?;
    Ok((u.hbar() / (m * g * g)).cbrt())
}

/// Dimensionless nonlinear phase `m g² t³/ħ`.
pub fn nonlinear_phase(m: f64, g: f64, t: f64, u: &UnitSystem) -> f64 {
    m * g * g * t.powi(3) / u.hbar()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transform_examples() {
        let x = Vec3::new(0.3, 1.0, -2.0);
        assert_eq!(to_accelerated_frame(x, 3.0, Vec3::ZERO), (x, 3.0));
        let (xp, tp) = to_accelerated_frame(Vec3::ZERO, 1.0, Vec3::along_z(2.0));
        assert_eq!(xp, Vec3::along_z(-1.0));
        assert_eq!(tp, 1.0);
        let g = Vec3::new(0.1, -9.8, 0.3);
        let (xp, tp) = to_accelerated_frame(x, 1.7, g);
        let (xb, tb) = from_accelerated_frame(xp, tp, g);
        assert!((xb - x).norm() < 1e-14);
        assert_eq!(tb, 1.7);
    }

    #[test]
    fn plug_in_newtonian_phase() {
        let d = newtonian_phase(5.0, Vec3::along_z(1.0), 1.0, 1.0, Vec3::along_z(1.0));
        assert!((d.newtonian_phase - (5.0 - 1.0 + 1.0 / 3.0)).abs() < 1e-15);
        assert_eq!(d.linear_term, -1.0);
        let d = newtonian_phase(5.0, Vec3::along_z(1.0), 1.0, 1.0, Vec3::ZERO);
        assert_eq!(d.newtonian_phase, 5.0);
    }

    #[test]
    fn energy_plug_in() {
        let p = energy_pair(-0.3, 1.0, Vec3::along_z(1.0), 2.0);
        assert_eq!(p.difference, -6.0);
        assert_eq!(p.e, 0.3);
        assert_eq!(energy_pair(1.0, 1.0, Vec3::ZERO, 2.0).difference, 0.0);
    }

    #[test]
    fn energy_difference_on_path_agrees_with_fixed_point_form() {
        let g = Vec3::new(0.0, 0.0, 1.7);
        let t = 0.8;
        let xp = -0.5 * t * t * g;
        assert!((energy_difference_at(xp, 2.0, g, t) - energy_difference(2.0, g, t)).abs() < 1e-14);
    }

    #[test]
    fn uncertainty_time() {
        let u = UnitSystem::natural();
        assert_eq!(uncertainty_reduction_time(1.0, 1.0, &u).unwrap(), 1.0);
        assert!(uncertainty_reduction_time(0.0, 1.0, &u).is_err());
        assert!(uncertainty_reduction_time(1.0, 0.0, &u).is_err());
        let tau = uncertainty_reduction_time(3.0, 0.4, &u).unwrap();
        assert!((nonlinear_phase(3.0, 0.4, tau, &u) - 1.0).abs() < 1e-14);
    }
}
