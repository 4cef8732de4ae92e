//! Executes a validated [`RunConfig`] and assembles the output document.

use gravicol::criteria::{balance_solve, classify_with_band, critical_width};
use gravicol::ensemble::force_report;
use gravicol::frames::{
    energy_difference, energy_pair, energy_pair_numeric, newtonian_phase, nonlinear_phase,
    uncertainty_reduction_time,
};
use gravicol::ode::IntegratorSpec;
use gravicol::quadrature::QuadratureSpec;
use gravicol::reduction::{reduction_estimate, ReductionEstimate};
use gravicol::sn::{sn_evolve, sn_minimize, variational_width, RadialGridState, SnEvolveOptions};
use gravicol::thermo::{
    compton_report, ensemble_temperature, reduction_temperature_compton, schwarzschild_field, schwarzschild_report,
    ensemble_report, WidthAssumption,
};
use gravicol::trajectories::{fall_closed_form, fall_time, integrate_bohmian, FieldModel, ForceTerms};
use gravicol::wavepacket::{phase, width_at, PacketState};
use gravicol::{ParticleSpec, PrefactorMode, Vec3};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::config::{RunConfig, SnEvolveTask, SweepTask, SweepVar, Task, TrajectoryTask};
use crate::emit::{normalize, number, to_value, Cell, Table};
use crate::error::{CliError, CliResult, Context};

pub struct Output {
    pub document: Map<String, Value>,
    pub table: Table,
}

struct Computed {
    inputs: Value,
    results: Value,
    oracle_deltas: Value,
    table: Option<Table>,
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn particle(spec: &ParticleSpec) -> Value {
    json!({"mass": number(spec.mass), "sigma0": number(spec.sigma0)})
}

pub fn run(cfg: &RunConfig) -> CliResult<Output> {
    let c = match &cfg.task {
        Task::Regime(spec) => regime(cfg, spec)?,
        Task::Forces { spec, r } => forces(cfg, spec, *r)?,
        Task::CollapseTime { mass, sigma0 } => collapse_time(cfg, *mass, *sigma0)?,
        Task::Temperature { mass, g, sigma0, width } => temperature(cfg, *mass, *g, *sigma0, *width)?,
        Task::Trajectory(t) => trajectory(cfg, t)?,
        Task::Frames { spec, g, t } => frames(cfg, spec, *g, *t)?,
        Task::SnMin { mass } => sn_min(cfg, *mass)?,
        Task::SnEvolve(t) => sn_evolve_task(cfg, t)?,
        Task::Sweep(t) => sweep(cfg, t)?,
    };

    let mut inputs = Map::new();
    inputs.insert("subcommand".into(), Value::String(cfg.task.name().into()));
    inputs.insert("band".into(), number(cfg.band));
    if let Value::Object(o) = c.inputs {
        inputs.extend(o);
    }
    let mut document = Map::new();
    document.insert("inputs".into(), Value::Object(inputs));
    document.insert("units".into(), to_value(&cfg.units));
    document.insert("mode".into(), Value::String(cfg.mode.as_str().into()));
    document.insert("results".into(), normalize(c.results));
    document.insert("oracle_deltas".into(), normalize(c.oracle_deltas));
    document.insert("version".into(), Value::String(env!("CARGO_PKG_VERSION").into()));
    let table = match c.table {
        Some(t) => t,
        None => Table::single_row(&document["results"]),
    };
    Ok(Output { document, table })
}

fn regime(cfg: &RunConfig, spec: &ParticleSpec) -> CliResult<Computed> {
    let u = &cfg.units;
    let rep = classify_with_band(spec, u, cfg.mode, cfg.band);
    let balance = balance_solve(spec.mass, u).within("collapse_criteria")?;
    let exact = critical_width(spec.mass, u, PrefactorMode::ExactPrefactor).within("collapse_criteria")?;
    let mut results = to_value(&rep);
    results["regime"] = Value::String(rep.regime.as_str().into());
    if let Value::Object(o) = &mut results {
        o.shift_remove("mode");
    }
    results["sigma_c_force_balance"] = number(balance);
    Ok(Computed {
        inputs: particle(spec),
        results,
        oracle_deltas: json!({"exact_width_vs_force_balance": number(rel(exact, balance))}),
        table: None,
    })
}

fn forces(cfg: &RunConfig, spec: &ParticleSpec, r: f64) -> CliResult<Computed> {
    let q = QuadratureSpec::default();
    let rep = force_report(spec, r, &cfg.units, cfg.mode, &q).within("potentials_forces")?;
    let a = rep.averaged;
    let mut inputs = particle(spec);
    inputs["r"] = number(r);
    inputs["quadrature_rel_tol"] = number(q.rel_tol);
    Ok(Computed {
        inputs,
        results: to_value(&rep),
        oracle_deltas: json!({
            "mean_quantum_vs_closed_form": number(rel(a.mean_quantum_accel, a.closed_form_quantum)),
            "mean_grav_vs_closed_form": number(rel(a.mean_grav_accel, a.closed_form_grav)),
        }),
        table: None,
    })
}

fn estimate_value(est: &ReductionEstimate) -> Value {
    let mut v = to_value(est);
    v["regime"] = Value::String(est.regime.as_str().into());
    if let Value::Object(o) = &mut v {
        o.shift_remove("mode");
    }
    v
}

fn collapse_time(cfg: &RunConfig, mass: f64, sigma0: Option<f64>) -> CliResult<Computed> {
    let u = &cfg.units;
    let s = match sigma0 {
        Some(s) => s,
        None => critical_width(mass, u, cfg.mode).within("collapse_criteria")?,
    };
    let spec = ParticleSpec::new(mass, s).within("wavepacket")?;
    let est = reduction_estimate(&spec, u, cfg.mode, cfg.band).within("frames_energy")?;
    let mut inputs = particle(&spec);
    inputs["at_critical"] = Value::Bool(sigma0.is_none());
    Ok(Computed {
        inputs,
        results: estimate_value(&est),
        oracle_deltas: json!({
            "fall_vs_critical_time": number(rel(est.tau_fall, est.tau_critical)),
            "uncertainty_vs_critical_time": number(rel(est.tau_uncertainty, est.tau_critical)),
            "nonlinear_phase_at_tau_minus_one":
                number(nonlinear_phase(mass, est.g_mean, est.tau_uncertainty, u) - 1.0),
        }),
        table: None,
    })
}

fn temperature(
    cfg: &RunConfig,
    mass: f64,
    g: Option<f64>,
    sigma0: Option<f64>,
    width: WidthAssumption,
) -> CliResult<Computed> {
    let u = &cfg.units;
    let rep = match width {
        WidthAssumption::Given => ensemble_report(mass, g.unwrap_or(f64::NAN), sigma0.unwrap_or(f64::NAN), u, cfg.mode),
        WidthAssumption::ComptonWavelength => compton_report(mass, g.unwrap_or(f64::NAN), u, cfg.mode),
        WidthAssumption::SchwarzschildRadius => schwarzschild_report(mass, u, cfg.mode),
    }
    .within("thermo")?;
    let g_used = g.unwrap_or_else(|| schwarzschild_field(mass, u));
    let chain = ensemble_temperature(mass, g_used, u.hbar() / mass, u, PrefactorMode::PaperOrderOfMagnitude)
        .and_then(|a| Ok(rel(a, reduction_temperature_compton(mass, g_used, u, PrefactorMode::ExactPrefactor)?)))
        .within("thermo")?;
    let mut results = to_value(&rep);
    if let Value::Object(o) = &mut results {
        o.shift_remove("mode");
        o.shift_remove("units");
    }
    let mut inputs = json!({"mass": number(mass), "width": width.as_str()});
    if let Some(g) = g {
        inputs["g"] = number(g);
    }
    if let Some(s) = sigma0 {
        inputs["sigma0"] = number(s);
    }
    Ok(Computed {
        inputs,
        results,
        oracle_deltas: json!({"ensemble_to_compton_chain": number(chain)}),
        table: None,
    })
}

fn trajectory(cfg: &RunConfig, t: &TrajectoryTask) -> CliResult<Computed> {
    let u = &cfg.units;
    let t_end = t.t_end.unwrap_or_else(|| 2.0 * fall_time(&t.spec, u, cfg.mode));
    let times: Vec<f64> = (0..=t.samples).map(|i| t_end * i as f64 / t.samples as f64).collect();
    let is = IntegratorSpec::default().with_tolerances(t.rel_tol, t.abs_tol);
    let tr = integrate_bohmian(&t.spec, t.r0, t.forces, &is, u, &times).within("trajectories")?;

    let mut table = Table::new(&["t", "r", "v"]);
    for s in &tr.states {
        table.rows.push(vec![s.t.into(), s.r.into(), s.v.into()]);
    }
    let mut deltas = Map::new();
    if let (ForceTerms::GravOnly, FieldModel::MeanField(mode)) = (t.forces.terms, t.forces.model) {
        if let Some(last) = tr.states.last() {
            let fp = fall_closed_form(&t.spec, t.r0, last.t, mode, u).within("trajectories")?;
            if fp.crossing_time.is_none() {
                deltas.insert("parabola_endpoint".into(), number(rel(last.r, fp.r)));
            }
        }
        if let Some(c) = tr.crossing {
            let fp = fall_closed_form(&t.spec, t.r0, f64::INFINITY, mode, u).within("trajectories")?;
            deltas.insert("crossing_time".into(), number(rel(c.t, fp.crossing_time.unwrap_or(f64::NAN))));
        }
    }
    let mut inputs = particle(&t.spec);
    inputs["r0"] = number(t.r0);
    inputs["t_end"] = number(t_end);
    inputs["samples"] = json!(t.samples);
    inputs["forces"] = Value::String(t.forces.terms.as_str().into());
    inputs["field"] = Value::String(
        match t.forces.model {
            FieldModel::Local => "local",
            FieldModel::MeanField(_) => "mean",
        }
        .into(),
    );
    inputs["rel_tol"] = number(t.rel_tol);
    inputs["abs_tol"] = number(t.abs_tol);
    Ok(Computed {
        inputs,
        results: json!({
            "states": to_value(&tr.states),
            "crossing": to_value(&tr.crossing),
            "accepted_steps": tr.accepted_steps,
            "rejected_steps": tr.rejected_steps,
        }),
        oracle_deltas: Value::Object(deltas),
        table: Some(table),
    })
}

fn frames(cfg: &RunConfig, spec: &ParticleSpec, g: f64, t: f64) -> CliResult<Computed> {
    let u = &cfg.units;
    let m = spec.mass;
    let gv = Vec3::along_z(g);
    let free = |x: Vec3, tt: f64| u.hbar() * phase(&PacketState::new(*spec, tt, Vec3::ZERO, u), x);
    let x_prime = -0.5 * t * t * gv;
    let s = free(x_prime, t);
    let numeric = energy_pair_numeric(free, m, gv, t, 1e-3 * t);
    let closed = energy_pair(-numeric.e, m, gv, t);
    let decomposition = newtonian_phase(s, x_prime, t, m, gv);
    let mut results = json!({
        "x_prime": number(x_prime.z),
        "phase": to_value(&decomposition),
        "energy_difference": number(energy_difference(m, gv, t)),
        "energy_numeric": to_value(&numeric),
        "nonlinear_phase": number(nonlinear_phase(m, g, t, u)),
    });
    let mut deltas = json!({"energy_difference_numeric_vs_closed": number(rel(numeric.difference, closed.difference))});
    if g != 0.0 {
        let tau = uncertainty_reduction_time(m, g.abs(), u).within("frames_energy")?;
        results["tau_uncertainty"] = number(tau);
        deltas["nonlinear_phase_at_tau_minus_one"] = number(nonlinear_phase(m, g, tau, u) - 1.0);
    }
    let mut inputs = particle(spec);
    inputs["g"] = number(g);
    inputs["t"] = number(t);
    inputs["fd_step"] = number(1e-3 * t);
    Ok(Computed { inputs, results, oracle_deltas: deltas, table: None })
}

fn sn_min(cfg: &RunConfig, mass: f64) -> CliResult<Computed> {
    let u = &cfg.units;
    let (sigma, e) = sn_minimize(mass, u).within("schrodinger_newton")?;
    let closed = variational_width(mass, u).within("schrodinger_newton")?;
    Ok(Computed {
        inputs: json!({"mass": number(mass)}),
        results: json!({"sigma_star": number(sigma), "energy": to_value(&e)}),
        oracle_deltas: json!({
            "sigma_star_vs_closed_form": number(rel(sigma, closed)),
            "kinetic_vs_closed_form": number(rel(e.kinetic, e.kinetic_closed_form)),
            "self_grav_vs_closed_form": number(rel(e.self_grav, e.self_grav_closed_form)),
        }),
        table: None,
    })
}

fn sn_evolve_task(cfg: &RunConfig, t: &SnEvolveTask) -> CliResult<Computed> {
    let u = &cfg.units;
    let init = RadialGridState::gaussian(t.grid_points, t.domain).within("schrodinger_newton")?;
    let time_unit = t.spec.mass * t.spec.sigma0 * t.spec.sigma0 / u.hbar();
    let opts = SnEvolveOptions {
        gravity: t.gravity,
        record_every: t.record_every,
        ..Default::default()
    };
    let ev = sn_evolve(&init, &t.spec, u, t.dt * time_unit, t.steps, &opts).within("schrodinger_newton")?;

    let mut table = Table::new(&["t", "w", "norm", "E_kin", "E_grav"]);
    for s in &ev.series {
        table.rows.push(vec![s.t.into(), s.w.into(), s.norm.into(), s.e_kin.into(), s.e_grav.into()]);
    }
    let e0 = ev.series[0].e_kin + ev.series[0].e_grav;
    let drift = ev.series.iter().map(|s| rel(s.e_kin + s.e_grav, e0)).fold(0.0, f64::max);
    let mut deltas = json!({"max_norm_step": number(ev.max_norm_step), "energy_drift": number(drift)});
    if !t.gravity {
        let free = ev
            .series
            .iter()
            .map(|s| rel(s.w / 3f64.sqrt(), width_at(&t.spec, s.t, u)))
            .fold(0.0, f64::max);
        deltas["free_width_vs_closed_form"] = number(free);
    }
    let (i_min, decreasing) = ev.first_minimum();
    let mut inputs = particle(&t.spec);
    inputs["dt_scaled"] = number(t.dt);
    inputs["steps"] = json!(t.steps);
    inputs["grid_points"] = json!(t.grid_points);
    inputs["domain"] = number(t.domain);
    inputs["record_every"] = json!(t.record_every);
    inputs["gravity"] = Value::Bool(t.gravity);
    inputs["norm_drift_limit"] = number(opts.norm_drift_limit);
    Ok(Computed {
        inputs,
        results: json!({
            "kappa": number(ev.kappa),
            "time_unit": number(time_unit),
            "initially_contracting": decreasing,
            "first_width_minimum": to_value(&ev.series[i_min]),
            "series": to_value(&ev.series),
        }),
        oracle_deltas: deltas,
        table: Some(table),
    })
}

const SWEEP_COLUMNS: [&str; 10] =
    ["mass", "sigma0", "m_c", "sigma_c", "ratio", "regime", "tau_fall", "tau_uncertainty", "tau_critical", "g_mean"];

fn sweep(cfg: &RunConfig, t: &SweepTask) -> CliResult<Computed> {
    let u = cfg.units;
    let (mode, band) = (cfg.mode, cfg.band);
    let row = |x: f64| -> CliResult<ReductionEstimate> {
        let (m, s) = match (t.vary, t.fixed) {
            (SweepVar::Mass, Some(s)) => (x, s),
            (SweepVar::Mass, None) => (x, critical_width(x, &u, mode).within("collapse_criteria")?),
            (SweepVar::Sigma0, fixed) => (fixed.unwrap_or(f64::NAN), x),
        };
        let spec = ParticleSpec::new(m, s).within("wavepacket")?;
        reduction_estimate(&spec, &u, mode, band).within("frames_energy")
    };
    let mut rows: Vec<(f64, ReductionEstimate)> = t
        .values
        .par_iter()
        .map(|&x| row(x).map(|r| (x, r)))
        .collect::<CliResult<_>>()?;
    rows.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut table = Table::new(&SWEEP_COLUMNS);
    let mut identity: f64 = 0.0;
    for (_, e) in &rows {
        identity = identity.max(rel(e.ratio * e.m_c, e.spec.mass));
        table.rows.push(vec![
            e.spec.mass.into(),
            e.spec.sigma0.into(),
            e.m_c.into(),
            e.sigma_c.into(),
            e.ratio.into(),
            Cell::Text(e.regime.as_str().into()),
            e.tau_fall.into(),
            e.tau_uncertainty.into(),
            e.tau_critical.into(),
            e.g_mean.into(),
        ]);
    }
    let (lo, hi) = (t.values[0], t.values[t.values.len() - 1]);
    let mut inputs = json!({
        "vary": match t.vary { SweepVar::Mass => "mass", SweepVar::Sigma0 => "sigma0" },
        "from": number(lo),
        "to": number(hi),
        "count": t.values.len(),
        "log": t.log,
    });
    match (t.vary, t.fixed) {
        (SweepVar::Mass, Some(s)) => inputs["sigma0"] = number(s),
        (SweepVar::Mass, None) => inputs["sigma0"] = Value::String("critical".into()),
        (SweepVar::Sigma0, Some(m)) => inputs["mass"] = number(m),
        (SweepVar::Sigma0, None) => return Err(CliError::Usage("sweep over sigma0 requires --mass".into())),
    }
    Ok(Computed {
        inputs,
        results: Value::Array(rows.iter().map(|(_, e)| estimate_value(e)).collect()),
        oracle_deltas: json!({"ratio_times_m_c_vs_mass": number(identity)}),
        table: Some(table),
    })
}
