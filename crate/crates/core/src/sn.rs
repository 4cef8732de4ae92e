//! Schrödinger–Newton energy of a Gaussian trial state, its variational
//! minimum, and a spherically symmetric time evolver.
//!
//! The evolver works with `σ₀` as the length unit and `mσ₀²/ħ` as the time
//! unit. In those units the radial equation for `u = rψ` reads
//!
//! `i u_t = -½ u_rr + Φ u`, `Φ(r) = -κ ∫|ψ(r')|²/max(r, r') d³r'`,
//!
//! with the single coupling `κ = Gm³σ₀/ħ² = (m/m_c)³`. Switching gravity off
//! sets `κ = 0` and leaves the free Schrödinger equation.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{check_mass, check_positive, Error, Result};
use crate::quadrature::{integrate, QuadratureSpec};
use crate::solve::{find_root, minimize};
use crate::units::{sn_scale_for_mass, UnitSystem};
use crate::wavepacket::ParticleSpec;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SNEnergyBreakdown {
    pub sigma: f64,
    pub kinetic: f64,
    pub self_grav: f64,
    pub total: f64,
    /// `3ħ²/(8mσ²)`
    pub kinetic_closed_form: f64,
    /// `-Gm²/(2√π σ)`
    pub self_grav_closed_form: f64,
}

fn unit_density(s: f64) -> f64 {
    (2.0 * PI).powf(-1.5) * (-0.5 * s * s).exp()
}

/// Kinetic and self-gravity integrals of the unit-width Gaussian, the
/// latter by nested quadrature with the shell theorem.
fn unit_energy_integrals(qspec: &QuadratureSpec) -> Result<(f64, f64)> {
    let upper = qspec.truncation_radius;
    // |∇ψ|² = s²ψ²/4
    let kin = integrate(|s| 4.0 * PI * s * s * 0.25 * s * s * unit_density(s), 0.0, upper, qspec)?.value;
    let inner_spec = qspec.with_rel_tol(qspec.rel_tol.min(1e-12).max(1e-14));
    let potential = |s: f64| -> f64 {
        let enclosed = integrate(|x| 4.0 * PI * x * x * unit_density(x), 0.0, s, &inner_spec);
        let shells = integrate(|x| 4.0 * PI * x * unit_density(x), s, upper, &inner_spec);
        match (enclosed, shells) {
            (Ok(a), Ok(b)) => -(a.value / s + b.value),
            _ => f64::NAN,
        }
    };
    let grav = integrate(|s| 0.5 * 4.0 * PI * s * s * unit_density(s) * potential(s), 0.0, upper, qspec)?.value;
    Ok((0.5 * kin, grav))
}

/// Energy of the normalized Gaussian of width `trial.sigma0`.
pub fn sn_energy(trial: &ParticleSpec, u: &UnitSystem) -> Result<SNEnergyBreakdown> {
    sn_energy_with(trial, u, &QuadratureSpec::default())
}

pub fn sn_energy_with(trial: &ParticleSpec, u: &UnitSystem, qspec: &QuadratureSpec) -> Result<SNEnergyBreakdown> {
    qspec.validate()?;
    let (kin, grav) = unit_energy_integrals(qspec)?;
    Ok(breakdown(trial, u, kin, grav))
}

fn breakdown(trial: &ParticleSpec, u: &UnitSystem, kin: f64, grav: f64) -> SNEnergyBreakdown {
    let (m, s) = (trial.mass, trial.sigma0);
    let kinetic = kin * u.hbar() * u.hbar() / (m * s * s);
    let self_grav = grav * u.g() * m * m / s;
    SNEnergyBreakdown {
        sigma: s,
        kinetic,
        self_grav,
        total: kinetic + self_grav,
        kinetic_closed_form: 3.0 * u.hbar() * u.hbar() / (8.0 * m * s * s),
        self_grav_closed_form: -u.g() * m * m / (2.0 * PI.sqrt() * s),
    }
}

/// `σ* = (3√π/2)·ħ²/(Gm³)` of the Gaussian trial family.
pub fn variational_width(m: f64, u: &UnitSystem) -> Result<f64> {
    Ok(1.5 * PI.sqrt() * sn_scale_for_mass(m, u)?.length)
}

/// Width minimizing the trial energy, searched in `[1e-2, 1e2]·ħ²/(Gm³)`.
pub fn sn_minimize(m: f64, u: &UnitSystem) -> Result<(f64, SNEnergyBreakdown)> {
    let m = check_mass(m)?;
    let qspec = QuadratureSpec::default();
    // the integrals do not depend on σ once lengths are measured in σ
    let (kin, grav) = unit_energy_integrals(&qspec)?;
    let scale = sn_scale_for_mass(m, u)?.length;
    let energy = |s: f64| -> Result<f64> {
        let trial = ParticleSpec::new(m, s * scale)?;
        Ok(breakdown(&trial, u, kin, grav).total / sn_scale_for_mass(m, u)?.energy)
    };
    let (s_min, _) = minimize(energy, 1e-2, 1e2, 1e-10)?;
    let trial = ParticleSpec::new(m, s_min * scale)?;
    Ok((trial.sigma0, breakdown(&trial, u, kin, grav)))
}

/// Samples `u = rψ` on `r_j = (j + 1)·dr`, `j = 0..n`, with `u = 0` at
/// `r = 0` and at `r = (n + 1)·dr`. Lengths are in units of `σ₀`, time in
/// units of `mσ₀²/ħ`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGridState {
    pub dr: f64,
    pub u: Vec<Complex64>,
    pub t: f64,
    pub norm: f64,
}

pub const MIN_POINTS_PER_SIGMA: f64 = 32.0;
pub const MIN_DOMAIN_SIGMA: f64 = 12.0;

impl RadialGridState {
    /// The initial Gaussian `(2π)^{-3/4} e^{-r²/4}` with zero phase.
    pub fn gaussian(n: usize, domain: f64) -> Result<Self> {
        if !(domain >= MIN_DOMAIN_SIGMA) || !domain.is_finite() {
            return Err(Error::InvalidSpec(format!(
                "domain must extend to at least {MIN_DOMAIN_SIGMA} sigma0, got {domain}"
            )));
        }
        let dr = domain / (n as f64 + 1.0);
        if !(1.0 / dr >= MIN_POINTS_PER_SIGMA) {
            return Err(Error::InvalidSpec(format!(
                "grid must resolve sigma0 with at least {MIN_POINTS_PER_SIGMA} points, got {:.2}",
                1.0 / dr
            )));
        }
        let u: Vec<Complex64> = (0..n)
            .map(|j| {
                let r = (j as f64 + 1.0) * dr;
                Complex64::new(r * (2.0 * PI).powf(-0.75) * (-0.25 * r * r).exp(), 0.0)
            })
            .collect();
        let mut st = RadialGridState { dr, u, t: 0.0, norm: 0.0 };
        st.norm = st.compute_norm();
        Ok(st)
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    pub fn radius(&self, j: usize) -> f64 {
        (j as f64 + 1.0) * self.dr
    }

    pub fn compute_norm(&self) -> f64 {
        4.0 * PI * self.dr * self.u.iter().map(|z| z.norm_sqr()).sum::<f64>()
    }

    /// `sqrt(∫r²|ψ|²dV / ∫|ψ|²dV)`
    pub fn rms_width(&self) -> f64 {
        let m2: f64 = self
            .u
            .iter()
            .enumerate()
            .map(|(j, z)| self.radius(j).powi(2) * z.norm_sqr())
            .sum();
        (4.0 * PI * self.dr * m2 / self.compute_norm()).sqrt()
    }

    pub fn kinetic_energy(&self) -> f64 {
        let n = self.u.len();
        let mut acc = 0.0;
        let mut prev = Complex64::new(0.0, 0.0);
        for j in 0..=n {
            let cur = if j < n { self.u[j] } else { Complex64::new(0.0, 0.0) };
            acc += (cur - prev).norm_sqr();
            prev = cur;
        }
        0.5 * 4.0 * PI * acc / self.dr
    }

    /// `Φ_j = -κ·4π dr Σ_k |u_k|²/max(r_j, r_k)`.
    pub fn potential(&self, kappa: f64) -> Vec<f64> {
        let n = self.u.len();
        let mut phi = vec![0.0; n];
        if kappa == 0.0 {
            return phi;
        }
        let w = 4.0 * PI * self.dr;
        let mut outer = vec![0.0; n + 1];
        for j in (0..n).rev() {
            outer[j] = outer[j + 1] + self.u[j].norm_sqr() / self.radius(j);
        }
        let mut enclosed = 0.0;
        for j in 0..n {
            let rho = self.u[j].norm_sqr();
            enclosed += rho;
            // k <= j counted in the enclosed sum, k > j in the shells
            phi[j] = -kappa * w * (enclosed / self.radius(j) + outer[j + 1]);
        }
        phi
    }

    pub fn grav_energy(&self, kappa: f64) -> f64 {
        let phi = self.potential(kappa);
        0.5 * 4.0 * PI * self.dr * phi.iter().zip(&self.u).map(|(p, z)| p * z.norm_sqr()).sum::<f64>()
    }
}

/// One recorded point of an evolution, in physical units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SnSample {
    pub t: f64,
    pub w: f64,
    pub norm: f64,
    pub e_kin: f64,
    pub e_grav: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SnEvolveOptions {
    pub gravity: bool,
    /// Record every this many steps (the initial and final states are
    /// always recorded).
    pub record_every: usize,
    pub norm_drift_limit: f64,
}

impl Default for SnEvolveOptions {
    fn default() -> Self {
        SnEvolveOptions {
            gravity: true,
            record_every: 1,
            norm_drift_limit: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SnEvolution {
    pub final_state: RadialGridState,
    pub series: Vec<SnSample>,
    pub kappa: f64,
    /// Largest single-step change of the norm.
    pub max_norm_step: f64,
}

impl SnEvolution {
    /// First local minimum of the width (index into `series`) and whether the
    /// width decreases strictly up to it.
    pub fn first_minimum(&self) -> (usize, bool) {
        let w: Vec<f64> = self.series.iter().map(|s| s.w).collect();
        let mut i = 0;
        while i + 1 < w.len() && w[i + 1] < w[i] {
            i += 1;
        }
        (i, i > 0)
    }
}

/// `κ = Gm³σ₀/ħ²`.
pub fn coupling(spec: &ParticleSpec, u: &UnitSystem) -> f64 {
    u.g() * spec.mass.powi(3) * spec.sigma0 / (u.hbar() * u.hbar())
}

/// Strang-split Crank–Nicolson evolution of the radial SN equation.
///
/// `dt` is in physical time. Returns the series `(t, w, norm, E_kin, E_grav)`
/// in physical units.
pub fn sn_evolve(
    initial: &RadialGridState,
    spec: &ParticleSpec,
    u: &UnitSystem,
    dt: f64,
    steps: usize,
    opts: &SnEvolveOptions,
) -> Result<SnEvolution> {
    let dt_phys = check_positive("dt", dt)?;
    if initial.is_empty() {
        return Err(Error::InvalidSpec("empty grid".into()));
    }
    if opts.record_every == 0 {
        return Err(Error::InvalidSpec("record_every must be >= 1".into()));
    }
    let time_unit = spec.mass * spec.sigma0 * spec.sigma0 / u.hbar();
    let energy_unit = u.hbar() / time_unit;
    let dt = dt_phys / time_unit;
    let kappa = if opts.gravity { coupling(spec, u) } else { 0.0 };

    let n = initial.len();
    let dr = initial.dr;
    // (1 + i dt/2 H) u' = (1 - i dt/2 H) u with H = -½ D2
    let half = Complex64::new(0.0, 0.5 * dt);
    let diag = Complex64::new(1.0, 0.0) + half / (dr * dr);
    let off = -half * (0.5 / (dr * dr));
    let rhs_diag = Complex64::new(2.0, 0.0) - diag;
    let rhs_off = -off;
    // Thomas forward sweep factors depend only on the constant matrix
    let mut cprime = vec![Complex64::new(0.0, 0.0); n];
    let mut denom = vec![Complex64::new(0.0, 0.0); n];
    denom[0] = diag;
    cprime[0] = off / diag;
    for j in 1..n {
        denom[j] = diag - off * cprime[j - 1];
        cprime[j] = off / denom[j];
    }

    let mut st = initial.clone();
    st.norm = st.compute_norm();
    let sample = |s: &RadialGridState| SnSample {
        t: s.t * time_unit,
        w: s.rms_width() * spec.sigma0,
        norm: s.norm,
        e_kin: s.kinetic_energy() * energy_unit,
        e_grav: s.grav_energy(kappa) * energy_unit,
    };
    let mut series = vec![sample(&st)];
    let mut rhs = vec![Complex64::new(0.0, 0.0); n];
    let mut max_norm_step: f64 = 0.0;

    let kick = |s: &mut RadialGridState| {
        if kappa != 0.0 {
            let phi = s.potential(kappa);
            for (z, p) in s.u.iter_mut().zip(&phi) {
                *z *= Complex64::from_polar(1.0, -0.5 * dt * p);
            }
        }
    };

    for step in 1..=steps {
        kick(&mut st);
        for j in 0..n {
            let mut v = rhs_diag * st.u[j];
            if j > 0 {
                v += rhs_off * st.u[j - 1];
            }
            if j + 1 < n {
                v += rhs_off * st.u[j + 1];
            }
            rhs[j] = v;
        }
        rhs[0] /= denom[0];
        for j in 1..n {
            rhs[j] = (rhs[j] - off * rhs[j - 1]) / denom[j];
        }
        st.u[n - 1] = rhs[n - 1];
        for j in (0..n - 1).rev() {
            st.u[j] = rhs[j] - cprime[j] * st.u[j + 1];
        }
        kick(&mut st);
        st.t = step as f64 * dt;

        let norm = st.compute_norm();
        if !norm.is_finite() {
            return Err(Error::NonFiniteState { t: st.t * time_unit });
        }
        let drift = (norm - st.norm).abs();
        max_norm_step = max_norm_step.max(drift);
        if drift > opts.norm_drift_limit {
            return Err(Error::NormDrift {
                step,
                drift,
                limit: opts.norm_drift_limit,
            });
        }
        st.norm = norm;
        if step % opts.record_every == 0 || step == steps {
            series.push(sample(&st));
        }
    }
    Ok(SnEvolution {
        final_state: st,
        series,
        kappa,
        max_norm_step,
    })
}

/// Settings for the crossover search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossoverSpec {
    pub grid_points: usize,
    pub domain: f64,
    /// Probe time in units of `mσ₀²/ħ`.
    pub probe_time: f64,
    pub steps: usize,
    /// Bracket in `m/m_c`, with `m_c = (ħ²/(Gσ₀))^{1/3}`.
    pub lo: f64,
    pub hi: f64,
}

impl Default for CrossoverSpec {
    fn default() -> Self {
        CrossoverSpec {
            grid_points: 1023,
            domain: 12.0,
            probe_time: 0.02,
            steps: 20,
            lo: 0.3,
            hi: 3.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossoverReport {
    /// Mass at which the width stops growing, over `m_c`.
    pub ratio: f64,
    pub mass: f64,
    pub m_c: f64,
    /// Virial estimate `(3√π/2)^{1/3}` for the initial Gaussian.
    pub virial_ratio: f64,
}

/// Mass at which `w(t_probe) - w(0)` changes sign at fixed `σ₀`.
pub fn dynamical_critical_mass(sigma0: f64, u: &UnitSystem, cs: &CrossoverSpec) -> Result<CrossoverReport> {
    let m_c = crate::criteria::critical_mass(sigma0, u, crate::units::PrefactorMode::PaperOrderOfMagnitude)?;
    let init = RadialGridState::gaussian(cs.grid_points, cs.domain)?;
    let growth = |ratio: f64| -> Result<f64> {
        let spec = ParticleSpec::new(ratio * m_c, sigma0)?;
        let time_unit = spec.mass * sigma0 * sigma0 / u.hbar();
        let dt = cs.probe_time / cs.steps as f64 * time_unit;
        let ev = sn_evolve(
            &init,
            &spec,
            u,
            dt,
            cs.steps,
            &SnEvolveOptions {
                record_every: cs.steps,
                ..Default::default()
            },
        )?;
        let first = ev.series.first().expect("initial sample").w;
        let last = ev.series.last().expect("final sample").w;
        Ok((last - first) / first)
    };
    let ratio = find_root(growth, cs.lo, cs.hi, 1e-8)?;
    Ok(CrossoverReport {
        ratio,
        mass: ratio * m_c,
        m_c,
        virial_ratio: (1.5 * PI.sqrt()).cbrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat() -> UnitSystem {
        UnitSystem::natural()
    }

    #[test]
    fn unit_energies() {
        let e = sn_energy(&ParticleSpec::new(1.0, 1.0).unwrap(), &nat()).unwrap();
        assert!((e.kinetic - 0.375).abs() < 1e-10);
        assert!((e.self_grav + 0.5 / PI.sqrt()).abs() < 1e-9);
        assert!((e.self_grav / e.self_grav_closed_form - 1.0).abs() < 1e-8);
        assert!((e.kinetic / e.kinetic_closed_form - 1.0).abs() < 1e-8);
        assert_eq!(e.total, e.kinetic + e.self_grav);
    }

    #[test]
    fn wide_packet_energy_vanishes_from_below() {
        let u = nat();
        let mut prev = f64::NEG_INFINITY;
        for s in [1e2, 1e3, 1e4] {
            let e = sn_energy(&ParticleSpec::new(1.0, s).unwrap(), &u).unwrap().total;
            assert!(e < 0.0);
            assert!(e > prev);
            prev = e;
        }
        assert!(prev.abs() < 1e-4);
    }

    #[test]
    fn minimizer_unit_mass() {
        let (s, e) = sn_minimize(1.0, &nat()).unwrap();
        assert!((s - 2.65868).abs() < 1e-5);
        assert!((s / variational_width(1.0, &nat()).unwrap() - 1.0).abs() < 1e-6);
        assert!(e.total < 0.0);
    }

    #[test]
    fn minimizer_scaling() {
        let u = nat();
        let (s1, _) = sn_minimize(1.0, &u).unwrap();
        let (s2, _) = sn_minimize(2.0, &u).unwrap();
        assert!((s1 / s2 / 8.0 - 1.0).abs() < 1e-8);
    }

    #[test]
    fn grid_validation() {
        assert!(RadialGridState::gaussian(4095, 12.0).is_ok());
        assert!(RadialGridState::gaussian(100, 12.0).is_err());
        assert!(RadialGridState::gaussian(4095, 10.0).is_err());
    }

    #[test]
    fn initial_state_moments() {
        let st = RadialGridState::gaussian(2047, 12.0).unwrap();
        assert!((st.norm - 1.0).abs() < 1e-12);
        assert!((st.rms_width() - 3f64.sqrt()).abs() < 1e-10);
        // discrete kinetic energy is second-order accurate
        assert!((st.kinetic_energy() - 0.375).abs() < 1e-4);
        let eg = st.grav_energy(1.0);
        assert!((eg + 0.5 / PI.sqrt()).abs() < 1e-3);
    }

    #[test]
    fn free_evolution_is_unitary() {
        let st = RadialGridState::gaussian(767, 12.0).unwrap();
        let spec = ParticleSpec::new(1.0, 1.0).unwrap();
        let opts = SnEvolveOptions {
            gravity: false,
            record_every: 10,
            ..Default::default()
        };
        let ev = sn_evolve(&st, &spec, &nat(), 1e-2, 50, &opts).unwrap();
        assert!(ev.max_norm_step < 1e-12);
        assert_eq!(ev.series.len(), 6);
        assert!(ev.series.windows(2).all(|w| w[1].w > w[0].w));
    }
}
