use std::time::Instant;

use gravicol::sn::{
    coupling, dynamical_critical_mass, sn_evolve, sn_minimize, CrossoverSpec, RadialGridState, SnEvolution,
    SnEvolveOptions,
};
use gravicol::wavepacket::width_at;
use gravicol::{ParticleSpec, UnitSystem};

const N: usize = 4095;
const L: f64 = 12.0;

/// Evolve from the Gaussian at `σ₀ = 1` (natural units) with `m` in units of
/// `(ħ²/(Gσ₀))^{1/3} = 1`, to `t_end` in units of `mσ₀²/ħ`.
fn run(m: f64, gravity: bool, dt_scaled: f64, t_end: f64, record_every: usize) -> SnEvolution {
    let u = UnitSystem::natural();
    let spec = ParticleSpec::new(m, 1.0).unwrap();
    let init = RadialGridState::gaussian(N, L).unwrap();
    let steps = (t_end / dt_scaled).round() as usize;
    let opts = SnEvolveOptions {
        gravity,
        record_every,
        ..Default::default()
    };
    sn_evolve(&init, &spec, &u, dt_scaled * m, steps, &opts).unwrap()
}

fn energy_drift(ev: &SnEvolution) -> f64 {
    let e0 = ev.series[0].e_kin + ev.series[0].e_grav;
    ev.series
        .iter()
        .map(|s| ((s.e_kin + s.e_grav - e0) / e0).abs())
        .fold(0.0, f64::max)
}

#[test]
fn free_evolution_matches_spreading_law() {
    let u = UnitSystem::natural();
    let m = 1.0;
    let spec = ParticleSpec::new(m, 1.0).unwrap();
    // half the spreading time 2mσ₀²/ħ
    let ev = run(m, false, 1e-3, 1.0, 50);
    assert_eq!(ev.kappa, 0.0);
    for s in &ev.series {
        // the rms radius of the 3-D Gaussian is √3 σ(t)
        let w = s.w / 3f64.sqrt();
        assert!((w / width_at(&spec, s.t, &u) - 1.0).abs() < 1e-4, "t = {}", s.t);
    }
}

#[test]
fn light_particle_spreads() {
    let ev = run(0.2, true, 1e-3, 1.0, 10);
    assert!((ev.kappa - 0.008).abs() < 1e-15);
    for w in ev.series.windows(2) {
        assert!(w[1].w > w[0].w);
    }
}

#[test]
fn heavy_particle_contracts() {
    // 5 m_c: the width falls monotonically until the first bounce near t = 0.32
    let ev = run(5.0, true, 1e-4, 0.3, 100);
    for w in ev.series.windows(2) {
        assert!(w[1].w < w[0].w, "t = {}", w[1].t);
    }
    let (_, decreasing) = ev.first_minimum();
    assert!(decreasing);
}

#[test]
#[ignore = "the collapsing packet bounces at t ~ 0.32 m sigma0^2/hbar and re-expands; monotone decrease over the full horizon does not hold"]
fn heavy_particle_contracts_over_full_horizon() {
    let ev = run(5.0, true, 1e-4, 1.0, 100);
    for w in ev.series.windows(2) {
        assert!(w[1].w < w[0].w, "t = {}", w[1].t);
    }
}

#[test]
fn heavy_particle_bounces_and_stays_finite() {
    let ev = run(5.0, true, 1e-4, 1.0, 100);
    let (i, decreasing) = ev.first_minimum();
    assert!(decreasing);
    let t_min = ev.series[i].t / 5.0;
    assert!((0.25..0.4).contains(&t_min), "{t_min}");
    assert!(ev.series.iter().all(|s| s.w > 0.0 && s.w.is_finite()));
    assert!(energy_drift(&ev) < 1e-2);
}

#[test]
fn norm_is_conserved_per_step() {
    let ev = run(1.0, true, 1e-3, 0.5, 10);
    assert!(ev.max_norm_step <= 1e-8);
    let steps = 500.0;
    for s in &ev.series {
        assert!((s.norm - 1.0).abs() <= 1e-8 * steps);
    }
}

#[test]
fn energy_drift_falls_with_step() {
    let coarse = energy_drift(&run(1.0, true, 1e-3, 1.0, 10));
    let fine = energy_drift(&run(1.0, true, 5e-4, 1.0, 20));
    assert!(coarse <= 1e-6, "{coarse}");
    assert!(fine <= 0.5 * coarse, "{fine} vs {coarse}");
}

#[test]
fn energy_stays_above_gaussian_minimum() {
    let u = UnitSystem::natural();
    for m in [1.0, 5.0] {
        let (_, e_min) = sn_minimize(m, &u).unwrap();
        let ev = run(m, true, 1e-3, 0.2, 20);
        for s in &ev.series {
            assert!(s.e_kin + s.e_grav >= e_min.total, "m = {m}");
        }
    }
}

#[test]
fn coupling_is_mass_ratio_cubed() {
    let u = UnitSystem::natural();
    assert!((coupling(&ParticleSpec::new(5.0, 1.0).unwrap(), &u) - 125.0).abs() < 1e-12);
    let si = UnitSystem::si();
    let s = 1e-9;
    let m_c = (si.hbar() * si.hbar() / (si.g() * s)).cbrt();
    assert!((coupling(&ParticleSpec::new(2.0 * m_c, s).unwrap(), &si) - 8.0).abs() < 1e-9);
}

#[test]
fn crossover_lies_in_band() {
    let rep = dynamical_critical_mass(1.0, &UnitSystem::natural(), &CrossoverSpec::default()).unwrap();
    assert!((0.3..=3.0).contains(&rep.ratio));
    assert!((rep.ratio / rep.virial_ratio - 1.0).abs() < 1e-3);
}

#[test]
fn reference_resolution_runs_at_desk_scale() {
    let t0 = Instant::now();
    let _ = run(5.0, true, 1e-4, 1.0, 1000);
    assert!(t0.elapsed().as_secs_f64() < 60.0);
}
