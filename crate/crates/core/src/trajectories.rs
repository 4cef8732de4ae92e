//! Radial Bohmian trajectories in the frozen (`σ = σ₀`) self-gravity and
//! quantum force fields, the closed-form gravity-dominated fall and the
//! kinematic reduction time.

use std::f64::consts::FRAC_2_PI;

use serde::Serialize;

use crate::ensemble::mean_accelerations_closed_form;
use crate::error::{check_radius, Error, Result};
use crate::ode::{integrate, IntegratorSpec};
use crate::units::{PrefactorMode, UnitSystem};
use crate::vec3::Vec3;
use crate::wavepacket::{width_at, ParticleSpec};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectoryState {
    pub t: f64,
    pub r: f64,
    pub v: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ForceTerms {
    GravOnly,
    QuantumOnly,
    Both,
}

impl ForceTerms {
    pub fn as_str(self) -> &'static str {
        match self {
            ForceTerms::GravOnly => "grav_only",
            ForceTerms::QuantumOnly => "quantum_only",
            ForceTerms::Both => "both",
        }
    }
}

/// How the selected forces depend on `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldModel {
    /// Pointwise profiles `f_q(r)`, `f_g(r)` of the unspread packet.
    Local,
    /// Constant accelerations equal to the ensemble means.
    MeanField(PrefactorMode),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ForceSelection {
    pub terms: ForceTerms,
    pub model: FieldModel,
}

impl ForceSelection {
    pub fn new(terms: ForceTerms, model: FieldModel) -> Self {
        ForceSelection { terms, model }
    }

    fn has_quantum(&self) -> bool {
        self.terms != ForceTerms::GravOnly
    }

    fn has_grav(&self) -> bool {
        self.terms != ForceTerms::QuantumOnly
    }
}

/// Magnitude of the falling acceleration used for the parabola.
fn fall_acceleration(spec: &ParticleSpec, u: &UnitSystem, mode: PrefactorMode) -> f64 {
    mean_accelerations_closed_form(spec, u, mode).1
}

/// Closed-form fall point; `crossing_time` is set once the particle has
/// reached the centre.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FallPoint {
    pub t: f64,
    pub r: f64,
    pub crossing_time: Option<f64>,
}

/// `r(t) = r₀ - ½|g|t²` clamped at the centre.
///
/// `|g| = Gm/σ₀²` in paper mode and `Gm/(πσ₀²)` in exact mode.
pub fn fall_closed_form(
    spec: &ParticleSpec,
    r0: f64,
    t: f64,
    mode: PrefactorMode,
    u: &UnitSystem,
) -> Result<FallPoint> {
    let r0 = check_radius(r0)?;
    if !(t >= 0.0) {
        return Err(Error::NonPositiveInput { name: "t", value: t });
    }
    let g = fall_acceleration(spec, u, mode);
    let crossing = (2.0 * r0 / g).sqrt();
    if t >= crossing {
        Ok(FallPoint {
            t,
            r: 0.0,
            crossing_time: Some(crossing),
        })
    } else {
        Ok(FallPoint {
            t,
            r: (r0 - 0.5 * g * t * t).max(0.0),
            crossing_time: None,
        })
    }
}

/// Kinematic reduction time.
///
/// Paper mode: `τ = sqrt(σ₀³/(Gm))`, which becomes `ħ³/(G²m⁵)` at the
/// critical width. Exact mode: `τ² = 2σ₀/|ḡ|` with `|ḡ| = Gm/(πσ₀²)`, the
/// time to fall from `r = σ₀` to the centre.
pub fn fall_time(spec: &ParticleSpec, u: &UnitSystem, mode: PrefactorMode) -> f64 {
    let (m, s) = (spec.mass, spec.sigma0);
    match mode {
        PrefactorMode::PaperOrderOfMagnitude => (s.powi(3) / (u.g() * m)).sqrt(),
        PrefactorMode::ExactPrefactor => (2.0 * s / fall_acceleration(spec, u, mode)).sqrt(),
    }
}

/// `ħ³/(G²m⁵)`
pub fn planck_scaled_time(m: f64, u: &UnitSystem) -> Result<f64> {
    let m = crate::error::check_mass(m)?;
    Ok(u.hbar().powi(3) / (u.g() * u.g() * m.powi(5)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub forces: ForceSelection,
    /// States at the requested times that precede any centre crossing.
    pub states: Vec<TrajectoryState>,
    /// Interpolated state at `r = 0`, when reached.
    pub crossing: Option<TrajectoryState>,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

/// Integrate `m r̈ = f_g(r) + f_q(r)` (selected terms) from rest at `r0`.
///
/// The equations are integrated with `σ₀` as the length unit and
/// `sqrt(σ₀/a)` as the time unit, `a` being the larger of the two
/// acceleration scales. `ispec.max_step` is in physical time.
pub fn integrate_bohmian(
    spec: &ParticleSpec,
    r0: f64,
    forces: ForceSelection,
    ispec: &IntegratorSpec,
    u: &UnitSystem,
    output_times: &[f64],
) -> Result<Trajectory> {
    let r0 = check_radius(r0)?;
    if !(r0 > 0.0 && r0 <= 8.0 * spec.sigma0) {
        return Err(Error::InvalidSpec(format!(
            "r0 must lie in (0, 8 sigma0], got {r0:e} with sigma0 = {:e}",
            spec.sigma0
        )));
    }
    let (m, s) = (spec.mass, spec.sigma0);
    let a_q = u.hbar() * u.hbar() / (m * m * s.powi(3));
    let a_g = u.g() * m / (s * s);
    let a_scale = a_q.max(a_g);
    let t_scale = (s / a_scale).sqrt();
    let (aq, ag) = (a_q / a_scale, a_g / a_scale);

    let (with_q, with_g) = (forces.has_quantum(), forces.has_grav());
    let accel: Box<dyn Fn(f64) -> f64> = match forces.model {
        FieldModel::Local => Box::new(move |x: f64| {
            // ħ²r/(4m²σ₀⁴) and -√(2/π)Gm r e^{-r²/2σ₀²}/σ₀³, both odd in r
            let q = if with_q { 0.25 * aq * x } else { 0.0 };
            let g = if with_g { -FRAC_2_PI.sqrt() * ag * x * (-0.5 * x * x).exp() } else { 0.0 };
            q + g
        }),
        FieldModel::MeanField(mode) => {
            let (q, g) = mean_accelerations_closed_form(spec, u, mode);
            let net = if with_q { q / a_scale } else { 0.0 } - if with_g { g / a_scale } else { 0.0 };
            Box::new(move |_| net)
        }
    };

    let scaled_out: Vec<f64> = output_times.iter().map(|t| t / t_scale).collect();
    let mut scaled_spec = *ispec;
    // the crossing is located by linear interpolation, keep steps short
    scaled_spec.max_step = (ispec.max_step / t_scale).min(1e-3);
    let sol = integrate(
        |_, y: &[f64; 2]| [y[1], accel(y[0])],
        0.0,
        [r0 / s, 0.0],
        &scaled_out,
        &scaled_spec,
        Some(|y: &[f64; 2]| y[0]),
    )?;
    let v_scale = s / t_scale;
    let to_state = |t: f64, y: [f64; 2]| TrajectoryState {
        t: t * t_scale,
        r: y[0] * s,
        v: y[1] * v_scale,
    };
    let mut states: Vec<TrajectoryState> = sol.points.iter().map(|(t, y)| to_state(*t, *y)).collect();
    // report requested times exactly
    for (st, t) in states.iter_mut().zip(output_times) {
        st.t = *t;
    }
    Ok(Trajectory {
        forces,
        states,
        crossing: sol.event.map(|(t, y)| {
            let mut c = to_state(t, y);
            c.r = 0.0;
            c
        }),
        accepted_steps: sol.accepted_steps,
        rejected_steps: sol.rejected_steps,
    })
}

/// Bohmian trajectory of the freely spreading packet in a homogeneous field:
/// `x(t) = x₀σ(t)/σ₀ - ½gt²`.
pub fn free_packet_trajectory(spec: &ParticleSpec, x0: Vec3, g: Vec3, t: f64, u: &UnitSystem) -> Result<Vec3> {
    if !(t >= 0.0) {
        return Err(Error::NonPositiveInput { name: "t", value: t });
    }
    Ok(x0 * (width_at(spec, t, u) / spec.sigma0) - 0.5 * t * t * g)
}

/// `ẍ = -g + ħ²x₀/(4m²σ₀σ³)` along the same trajectory.
pub fn free_packet_acceleration(spec: &ParticleSpec, x0: Vec3, g: Vec3, t: f64, u: &UnitSystem) -> Vec3 {
    let sig = width_at(spec, t, u);
    let m = spec.mass;
    x0 * (u.hbar() * u.hbar() / (4.0 * m * m * spec.sigma0 * sig.powi(3))) - g
}
