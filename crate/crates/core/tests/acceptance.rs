//! One PASS/FAIL line per acceptance criterion. Run with `--nocapture` to see
//! the report.

use std::time::Instant;

use gravicol::criteria::{balance_solve, critical_width};
use gravicol::ensemble::{
    mean_accelerations_closed_form, mean_grav_acceleration, mean_quantum_acceleration, one_sigma_probability,
};
use gravicol::frames::{energy_pair, energy_pair_numeric, nonlinear_phase, uncertainty_reduction_time};
use gravicol::frames::{einsteinian_from_newtonian, newtonian_from_einsteinian, to_accelerated_frame};
use gravicol::ode::IntegratorSpec;
use gravicol::quadrature::QuadratureSpec;
use gravicol::sn::{dynamical_critical_mass, sn_evolve, sn_minimize, CrossoverSpec, RadialGridState, SnEvolveOptions};
use gravicol::thermo::{ensemble_temperature, reduction_temperature_compton, reduction_temperature_schwarzschild};
use gravicol::trajectories::{
    fall_closed_form, fall_time, integrate_bohmian, planck_scaled_time, FieldModel, ForceSelection, ForceTerms,
};
use gravicol::units::PLANCK_MASS_SI;
use gravicol::wavepacket::{phase, psi, width_at, PacketState};
use gravicol::{ParticleSpec, PrefactorMode, UnitSystem, Vec3};

const PAPER: PrefactorMode = PrefactorMode::PaperOrderOfMagnitude;
const EXACT: PrefactorMode = PrefactorMode::ExactPrefactor;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

/// Deterministic uniform samples in `[lo, hi)`.
struct Lcg(u64);

impl Lcg {
    fn next(&mut self, lo: f64, hi: f64) -> f64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        lo + (hi - lo) * ((self.0 >> 11) as f64 / (1u64 << 53) as f64)
    }
}

struct Report(Vec<(u32, bool)>);

impl Report {
    fn line(&mut self, n: u32, ok: bool, detail: String) {
        println!("criterion {n}: {} {detail}", if ok { "PASS" } else { "FAIL" });
        self.0.push((n, ok));
    }
}

fn info(detail: String) {
    println!("  INFO {detail}");
}

fn averaged_forces(rep: &mut Report) {
    let u = UnitSystem::natural();
    let q = QuadratureSpec::default();
    let mut rng = Lcg(1);
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let spec = ParticleSpec::new(rng.next(0.1, 10.0), rng.next(0.1, 10.0)).unwrap();
        let aq = mean_quantum_acceleration(&spec, &u, &q).unwrap();
        let ag = mean_grav_acceleration(&spec, &u, &q).unwrap();
        worst = worst.max(aq.rel_diff()).max(ag.rel_diff());
    }
    let secs = start.elapsed().as_secs_f64();
    rep.line(1, worst <= 1e-8 && secs < 1.0, format!("max rel diff {worst:.3e}, {secs:.3} s"));
}

fn critical_width_balance(rep: &mut Report) {
    let u = UnitSystem::natural();
    let mut ok = true;
    let exact = std::f64::consts::FRAC_PI_2.sqrt();
    let mut worst: f64 = 0.0;
    let mut coef = 0.0;
    for m in [0.5_f64, 1.0, 2.0] {
        let scale = 1.0 / m.powi(3);
        coef = balance_solve(m, &u).unwrap() / scale;
        worst = worst.max((coef - exact).abs());
        ok &= critical_width(m, &u, PAPER).unwrap() == scale;
    }
    // 1.25331 is quoted to six figures
    ok &= worst <= 1e-6 && (coef - 1.25331).abs() <= 5e-6;
    rep.line(2, ok, format!("balance coefficient {coef:.7}, |c - sqrt(pi/2)| = {worst:.3e}, paper constant 1"));
}

fn reduction_time_routes(rep: &mut Report) {
    let u = UnitSystem::natural();
    let mut rng = Lcg(3);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let m = rng.next(0.1, 10.0);
        let spec = ParticleSpec::new(m, critical_width(m, &u, PAPER).unwrap()).unwrap();
        let tau = planck_scaled_time(m, &u).unwrap();
        let g = mean_accelerations_closed_form(&spec, &u, PAPER).1;
        worst = worst
            .max(rel(fall_time(&spec, &u, PAPER), tau))
            .max(rel(uncertainty_reduction_time(m, g, &u).unwrap(), tau));
    }
    let tau_p = planck_scaled_time(PLANCK_MASS_SI, &UnitSystem::si()).unwrap();
    let ok = worst <= 1e-12 && rel(tau_p, 5.39e-44) <= 5e-3;
    rep.line(3, ok, format!("route rel diff {worst:.3e}, Planck-mass tau {tau_p:.4e} s"));
}

fn trajectory_oracle(rep: &mut Report) {
    let u = UnitSystem::natural();
    let ispec = IntegratorSpec::default();
    let spec = ParticleSpec::new(1.0, 1.0).unwrap();
    let mut worst: f64 = 0.0;
    for mode in [PAPER, EXACT] {
        let forces = ForceSelection::new(ForceTerms::GravOnly, FieldModel::MeanField(mode));
        let t_cross = fall_closed_form(&spec, 1.0, 1e9, mode, &u).unwrap().crossing_time.unwrap();
        let t_end = 0.9 * t_cross;
        let tr = integrate_bohmian(&spec, 1.0, forces, &ispec, &u, &[t_end]).unwrap();
        let expect = fall_closed_form(&spec, 1.0, t_end, mode, &u).unwrap().r;
        worst = worst.max(rel(tr.states[0].r, expect));
        let full = integrate_bohmian(&spec, 1.0, forces, &ispec, &u, &[2.0 * t_cross]).unwrap();
        worst = worst.max(rel(full.crossing.unwrap().t, t_cross));
    }

    // balance mass for σ₀ = 1 in exact mode
    let m_b = 1.25331_f64.cbrt();
    let spec_b = ParticleSpec::new(m_b, 1.0).unwrap();
    let tau = fall_time(&spec_b, &u, EXACT);
    let both_mean = ForceSelection::new(ForceTerms::Both, FieldModel::MeanField(EXACT));
    let tr = integrate_bohmian(&spec_b, 1.0, both_mean, &ispec, &u, &[tau]).unwrap();
    let drift = (tr.states[0].r - 1.0).abs();
    let both_local = ForceSelection::new(ForceTerms::Both, FieldModel::Local);
    let local = integrate_bohmian(&spec_b, 1.0, both_local, &ispec, &u, &[tau]).unwrap();
    info(format!(
        "local force profiles drift {:.3} sigma0 over tau at the balance mass",
        (local.states[0].r - 1.0).abs()
    ));
    let ok = worst <= 1e-6 && drift <= 0.05;
    rep.line(4, ok, format!("endpoint rel diff {worst:.3e}, mean-field drift {drift:.3e} sigma0"));
}

fn frame_machinery(rep: &mut Report) {
    let u = UnitSystem::natural();
    let spec = ParticleSpec::new(1.3, 0.7).unwrap();
    let g = Vec3::new(0.2, -0.4, 1.5);
    let mut round_trip: f64 = 0.0;
    for t in [0.1, 0.7, 2.0] {
        let lab = PacketState::new(spec, t, -g, &u);
        for x in [Vec3::new(0.3, 0.1, -0.2), Vec3::new(-1.0, 2.0, 0.5)] {
            let v = psi(&lab, x);
            let (xp, _) = to_accelerated_frame(x, t, g);
            let phi = einsteinian_from_newtonian(v, x, t, spec.mass, g, &u);
            let back = newtonian_from_einsteinian(phi, xp, t, spec.mass, g, &u);
            round_trip = round_trip.max((back.to_complex() - v.to_complex()).norm() / v.modulus);
        }
    }

    let free = |x: Vec3, t: f64| u.hbar() * phase(&PacketState::new(spec, t, Vec3::ZERO, &u), x);
    let mut fd: f64 = 0.0;
    for t in [0.3, 1.0, 1.8] {
        let num = energy_pair_numeric(free, spec.mass, g, t, 1e-3 * t);
        let closed = energy_pair(-num.e, spec.mass, g, t);
        fd = fd.max(rel(num.difference, closed.difference));
    }

    let gm = 0.8;
    let tau = uncertainty_reduction_time(spec.mass, gm, &u).unwrap();
    let phase_err = (nonlinear_phase(spec.mass, gm, tau, &u) - 1.0).abs();
    let ok = round_trip <= 1e-12 && fd <= 1e-6 && phase_err <= 1e-12;
    rep.line(
        5,
        ok,
        format!("round trip {round_trip:.3e}, energy mismatch rel diff {fd:.3e}, m g^2 tau^3/hbar - 1 = {phase_err:.1e}"),
    );
}

fn enclosed_probability(rep: &mut Report) {
    let p = one_sigma_probability(&QuadratureSpec::default()).unwrap();
    let closed = libm::erf(std::f64::consts::FRAC_1_SQRT_2)
        - std::f64::consts::FRAC_2_PI.sqrt() * (-0.5f64).exp();
    let ok = (p - closed).abs() <= 1e-9 && (p - 0.198748).abs() <= 1e-6;
    rep.line(6, ok, format!("P = {p:.9}, closed form {closed:.9}"));
}

fn temperatures(rep: &mut Report) {
    let si = UnitSystem::si();
    let t_g = reduction_temperature_compton(1.0, 9.8, &si, PAPER).unwrap();
    let t_bh = reduction_temperature_schwarzschild(PLANCK_MASS_SI, &si, PAPER).unwrap();
    let u = UnitSystem::natural();
    let mut rng = Lcg(7);
    let mut chain: f64 = 0.0;
    for _ in 0..20 {
        let (m, g) = (rng.next(0.1, 10.0), rng.next(0.1, 10.0));
        let a = ensemble_temperature(m, g, u.hbar() / m, &u, PAPER).unwrap();
        chain = chain.max(rel(a, reduction_temperature_compton(m, g, &u, EXACT).unwrap()));
    }
    let ok = rel(t_g, 7.48e-11) <= 5e-3 && rel(t_bh, 5.26e6) <= 5e-3 && chain <= 1e-12;
    rep.line(7, ok, format!("T(9.8 m/s^2) = {t_g:.4e} K, T(m_P) = {t_bh:.4e} K, chain {chain:.1e}"));
}

fn schrodinger_newton(rep: &mut Report) {
    let u = UnitSystem::natural();
    let (sigma, _) = sn_minimize(1.0, &u).unwrap();
    let var_ok = (sigma - 2.65868).abs() <= 1e-6 * 2.65868 + 5e-6;

    let init = RadialGridState::gaussian(4095, 12.0).unwrap();
    let mut max_secs: f64 = 0.0;
    let mut max_norm: f64 = 0.0;
    let mut evolve = |m: f64, gravity: bool, dt: f64, t_end: f64| {
        let spec = ParticleSpec::new(m, 1.0).unwrap();
        let opts = SnEvolveOptions { gravity, record_every: 10, ..Default::default() };
        let start = Instant::now();
        let ev = sn_evolve(&init, &spec, &u, dt * m, (t_end / dt).round() as usize, &opts).unwrap();
        max_secs = max_secs.max(start.elapsed().as_secs_f64());
        max_norm = max_norm.max(ev.max_norm_step);
        ev
    };

    let free = evolve(1.0, false, 1e-3, 1.0);
    let spec = ParticleSpec::new(1.0, 1.0).unwrap();
    let free_err = free
        .series
        .iter()
        .map(|s| rel(s.w / 3f64.sqrt(), width_at(&spec, s.t, &u)))
        .fold(0.0, f64::max);

    let light = evolve(0.2, true, 1e-3, 1.0);
    let grows = light.series.windows(2).all(|w| w[1].w > w[0].w);

    let heavy = evolve(5.0, true, 1e-4, 1.0);
    let (i_min, shrinks) = heavy.first_minimum();
    let w0 = heavy.series[0].w;
    let w_min = heavy.series[i_min].w;
    let w_end = heavy.series.last().unwrap().w;
    if w_end > w_min {
        info(format!(
            "5 m_c: width falls to {:.3} w0 at t = {:.3} m sigma0^2/hbar, then rebounds to {:.3} w0",
            w_min / w0,
            heavy.series[i_min].t / 5.0,
            w_end / w0
        ));
    }

    let cross = dynamical_critical_mass(1.0, &u, &CrossoverSpec::default()).unwrap();
    let ok = var_ok
        && free_err <= 1e-4
        && grows
        && shrinks
        && (0.3..=3.0).contains(&cross.ratio)
        && max_norm <= 1e-8
        && max_secs <= 60.0;
    rep.line(
        8,
        ok,
        format!(
            "sigma* = {sigma:.6}, free rel err {free_err:.2e}, 0.2 m_c grows {grows}, 5 m_c contracts {shrinks}, \
             crossover {:.4} m_c, norm step {max_norm:.1e}, slowest run {max_secs:.2} s",
            cross.ratio
        ),
    );
}

fn planck_scale_values(rep: &mut Report) {
    let l = critical_width(PLANCK_MASS_SI, &UnitSystem::si(), PAPER).unwrap();
    rep.line(9, rel(l, 1.62e-35) <= 5e-3, format!("critical width at the Planck mass {l:.4e} m"));
}

#[test]
fn acceptance() {
    let mut rep = Report(Vec::new());
    averaged_forces(&mut rep);
    critical_width_balance(&mut rep);
    reduction_time_routes(&mut rep);
    trajectory_oracle(&mut rep);
    frame_machinery(&mut rep);
    enclosed_probability(&mut rep);
    temperatures(&mut rep);
    schrodinger_newton(&mut rep);
    planck_scale_values(&mut rep);
    let failed: Vec<u32> = rep.0.iter().filter(|(_, ok)| !ok).map(|(n, _)| *n).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
