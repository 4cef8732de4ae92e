//! Command-line grammar and its validation into a [`RunConfig`].

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gravicol::criteria::DEFAULT_TRANSITION_BAND;
use gravicol::sn::{MIN_DOMAIN_SIGMA, MIN_POINTS_PER_SIGMA};
use gravicol::thermo::WidthAssumption;
use gravicol::trajectories::{FieldModel, ForceSelection, ForceTerms};
use gravicol::{ParticleSpec, PrefactorMode, UnitSystem};

use crate::error::{CliError, CliResult, Context};

pub const THREADS_ENV: &str = "GRAVICOL_THREADS";

#[derive(Debug, Parser)]
#[command(name = "gravicol", version, about = "Gravitationally induced wave-function reduction estimates")]
pub struct Cli {
    /// Unit preset for all inputs and outputs.
    #[arg(long, value_enum, default_value_t = UnitsArg::Si, global = true)]
    pub units: UnitsArg,
    /// Keep the Gaussian prefactors (exact) or drop them (paper).
    #[arg(long, value_enum, default_value_t = ModeArg::Exact, global = true)]
    pub mode: ModeArg,
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub emit: Format,
    /// Write here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Half-width of the transition band in m/m_c.
    #[arg(long, default_value_t = DEFAULT_TRANSITION_BAND, global = true)]
    pub band: f64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum UnitsArg {
    Si,
    Natural,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Paper,
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WidthArg {
    Given,
    Compton,
    Schwarzschild,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ForcesArg {
    Grav,
    Quantum,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FieldArg {
    Local,
    Mean,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepVar {
    Mass,
    Sigma0,
}

#[derive(Debug, Args)]
pub struct Particle {
    #[arg(long)]
    pub mass: f64,
    #[arg(long)]
    pub sigma0: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify a particle against the critical mass and width.
    #[command(allow_negative_numbers = true)]
    Regime(Particle),
    /// Potentials and forces at a radius, plus the ensemble averages.
    #[command(allow_negative_numbers = true)]
    Forces {
        #[command(flatten)]
        particle: Particle,
        /// Radius, defaults to sigma0.
        #[arg(long)]
        r: Option<f64>,
    },
    /// Reduction time by the fall and uncertainty routes.
    #[command(allow_negative_numbers = true)]
    CollapseTime {
        #[arg(long)]
        mass: f64,
        #[arg(long, conflicts_with = "at_critical")]
        sigma0: Option<f64>,
        /// Use the critical width of the mass.
        #[arg(long)]
        at_critical: bool,
    },
    /// Reduction temperature with the Unruh and Hawking-order comparisons.
    #[command(allow_negative_numbers = true)]
    Temperature {
        #[arg(long)]
        mass: f64,
        #[arg(long)]
        g: Option<f64>,
        #[arg(long)]
        sigma0: Option<f64>,
        #[arg(long, value_enum, default_value_t = WidthArg::Given)]
        width: WidthArg,
        /// Override the speed of light (natural units only).
        #[arg(long)]
        c: Option<f64>,
    },
    /// Radial Bohmian trajectory from rest, emitted as (t, r, v).
    #[command(allow_negative_numbers = true)]
    Trajectory {
        #[command(flatten)]
        particle: Particle,
        /// Start radius, defaults to sigma0.
        #[arg(long)]
        r0: Option<f64>,
        /// End time, defaults to twice the fall time.
        #[arg(long)]
        t_end: Option<f64>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, value_enum, default_value_t = ForcesArg::Both)]
        forces: ForcesArg,
        #[arg(long, value_enum, default_value_t = FieldArg::Mean)]
        field: FieldArg,
        #[arg(long, default_value_t = 1e-10)]
        rel_tol: f64,
        #[arg(long, default_value_t = 1e-12)]
        abs_tol: f64,
    },
    /// Lab and falling-frame phases and the energy mismatch along the fall.
    #[command(allow_negative_numbers = true)]
    Frames {
        #[command(flatten)]
        particle: Particle,
        /// Field strength along +z.
        #[arg(long)]
        g: f64,
        #[arg(long)]
        t: f64,
    },
    /// Gaussian variational minimum of the Schrodinger-Newton energy.
    #[command(allow_negative_numbers = true)]
    SnMin {
        #[arg(long)]
        mass: f64,
    },
    /// Radial Schrodinger-Newton evolution, emitted as (t, w, norm, E_kin, E_grav).
    #[command(allow_negative_numbers = true)]
    SnEvolve {
        #[command(flatten)]
        particle: Particle,
        /// Step in units of m sigma0^2/hbar.
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        /// Horizon in units of m sigma0^2/hbar.
        #[arg(long, default_value_t = 1.0)]
        t_end: f64,
        #[arg(long, default_value_t = 4095)]
        grid_points: usize,
        /// Grid extent in units of sigma0.
        #[arg(long, default_value_t = 12.0)]
        domain: f64,
        #[arg(long, default_value_t = 10)]
        record_every: usize,
        #[arg(long)]
        no_gravity: bool,
    },
    /// Regime and reduction times over a range of masses or widths.
    #[command(allow_negative_numbers = true)]
    Sweep {
        #[arg(long, value_enum)]
        vary: SweepVar,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long)]
        count: usize,
        #[arg(long)]
        log: bool,
        /// Fixed mass when varying sigma0.
        #[arg(long)]
        mass: Option<f64>,
        /// Fixed width when varying mass; omitted, each row sits at its
        /// critical width.
        #[arg(long)]
        sigma0: Option<f64>,
    },
}

/// A validated run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub units: UnitSystem,
    pub mode: PrefactorMode,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub band: f64,
    pub threads: Option<usize>,
    pub task: Task,
}

#[derive(Debug, Clone)]
pub enum Task {
    Regime(ParticleSpec),
    Forces { spec: ParticleSpec, r: f64 },
    CollapseTime { mass: f64, sigma0: Option<f64> },
    Temperature { mass: f64, g: Option<f64>, sigma0: Option<f64>, width: WidthAssumption },
    Trajectory(TrajectoryTask),
    Frames { spec: ParticleSpec, g: f64, t: f64 },
    SnMin { mass: f64 },
    SnEvolve(SnEvolveTask),
    Sweep(SweepTask),
}

#[derive(Debug, Clone)]
pub struct TrajectoryTask {
    pub spec: ParticleSpec,
    pub r0: f64,
    pub t_end: Option<f64>,
    pub samples: usize,
    pub forces: ForceSelection,
    pub rel_tol: f64,
    pub abs_tol: f64,
}

#[derive(Debug, Clone)]
pub struct SnEvolveTask {
    pub spec: ParticleSpec,
    pub dt: f64,
    pub steps: usize,
    pub grid_points: usize,
    pub domain: f64,
    pub record_every: usize,
    pub gravity: bool,
}

#[derive(Debug, Clone)]
pub struct SweepTask {
    pub vary: SweepVar,
    pub values: Vec<f64>,
    pub fixed: Option<f64>,
    pub log: bool,
}

impl Task {
    pub fn name(&self) -> &'static str {
        match self {
            Task::Regime(_) => "regime",
            Task::Forces { .. } => "forces",
            Task::CollapseTime { .. } => "collapse-time",
            Task::Temperature { .. } => "temperature",
            Task::Trajectory(_) => "trajectory",
            Task::Frames { .. } => "frames",
            Task::SnMin { .. } => "sn-min",
            Task::SnEvolve(_) => "sn-evolve",
            Task::Sweep(_) => "sweep",
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn positive(name: &str, x: f64) -> CliResult<f64> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(usage(format!("--{name} must be positive and finite, got {x}")))
    }
}

fn spec(p: &Particle) -> CliResult<ParticleSpec> {
    ParticleSpec::new(p.mass, p.sigma0).within("wavepacket")
}

/// Parse the thread cap; unset means rayon's default.
pub fn threads_from_env(raw: Option<String>) -> CliResult<Option<usize>> {
    match raw {
        None => Ok(None),
        Some(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(usage(format!("{THREADS_ENV} must be a positive integer, got {s:?}"))),
        },
    }
}

pub fn sweep_values(from: f64, to: f64, count: usize, log: bool) -> Vec<f64> {
    if count == 1 {
        return vec![from];
    }
    let last = (count - 1) as f64;
    (0..count)
        .map(|i| {
            let f = i as f64 / last;
            if log {
                (from.ln() + f * (to.ln() - from.ln())).exp()
            } else {
                from + f * (to - from)
            }
        })
        .collect()
}

impl RunConfig {
    pub fn from_cli(cli: Cli, threads_env: Option<String>) -> CliResult<Self> {
        let mut units = match cli.units {
            UnitsArg::Si => UnitSystem::si(),
            UnitsArg::Natural => UnitSystem::natural(),
        };
        let mode = match cli.mode {
            ModeArg::Paper => PrefactorMode::PaperOrderOfMagnitude,
            ModeArg::Exact => PrefactorMode::ExactPrefactor,
        };
        if !(cli.band >= 0.0 && cli.band < 1.0) {
            return Err(usage(format!("--band must lie in [0, 1), got {}", cli.band)));
        }
        let threads = threads_from_env(threads_env)?;

        let task = match cli.command {
            Command::Regime(p) => Task::Regime(spec(&p)?),
            Command::Forces { particle, r } => {
                let spec = spec(&particle)?;
                let r = r.unwrap_or(spec.sigma0);
                if !(r >= 0.0 && r.is_finite()) {
                    return Err(usage(format!("--r must be non-negative and finite, got {r}")));
                }
                Task::Forces { spec, r }
            }
            Command::CollapseTime { mass, sigma0, at_critical } => {
                positive("mass", mass)?;
                match (sigma0, at_critical) {
                    (Some(s), false) => Task::CollapseTime { mass, sigma0: Some(positive("sigma0", s)?) },
                    (None, true) => Task::CollapseTime { mass, sigma0: None },
                    _ => return Err(usage("collapse-time needs exactly one of --sigma0 or --at-critical")),
                }
            }
            Command::Temperature { mass, g, sigma0, width, c } => {
                positive("mass", mass)?;
                if let Some(c) = c {
                    if cli.units != UnitsArg::Natural {
                        return Err(usage("--c is only accepted with --units natural"));
                    }
                    units = units.with_speed_of_light(positive("c", c)?);
                }
                let width = match width {
                    WidthArg::Given => WidthAssumption::Given,
                    WidthArg::Compton => WidthAssumption::ComptonWavelength,
                    WidthArg::Schwarzschild => WidthAssumption::SchwarzschildRadius,
                };
                let need = |flag: &str, v: Option<f64>| -> CliResult<f64> {
                    positive(flag, v.ok_or_else(|| usage(format!("--width {} requires --{flag}", width.as_str())))?)
                };
                let reject = |flag: &str, v: Option<f64>| -> CliResult<()> {
                    match v {
                        Some(_) => Err(usage(format!("--{flag} is fixed by --width {}", width.as_str()))),
                        None => Ok(()),
                    }
                };
                match width {
                    WidthAssumption::Given => {
                        let g = need("g", g)?;
                        let s = need("sigma0", sigma0)?;
                        Task::Temperature { mass, g: Some(g), sigma0: Some(s), width }
                    }
                    WidthAssumption::ComptonWavelength => {
                        let g = need("g", g)?;
                        reject("sigma0", sigma0)?;
                        Task::Temperature { mass, g: Some(g), sigma0: None, width }
                    }
                    WidthAssumption::SchwarzschildRadius => {
                        reject("g", g)?;
                        reject("sigma0", sigma0)?;
                        Task::Temperature { mass, g: None, sigma0: None, width }
                    }
                }
            }
            Command::Trajectory { particle, r0, t_end, samples, forces, field, rel_tol, abs_tol } => {
                let spec = spec(&particle)?;
                let r0 = positive("r0", r0.unwrap_or(spec.sigma0))?;
                if r0 > 8.0 * spec.sigma0 {
                    return Err(usage(format!("--r0 must not exceed 8 sigma0, got {r0}")));
                }
                let t_end = t_end.map(|t| positive("t-end", t)).transpose()?;
                if samples == 0 {
                    return Err(usage("--samples must be at least 1"));
                }
                let terms = match forces {
                    ForcesArg::Grav => ForceTerms::GravOnly,
                    ForcesArg::Quantum => ForceTerms::QuantumOnly,
                    ForcesArg::Both => ForceTerms::Both,
                };
                let model = match field {
                    FieldArg::Local => FieldModel::Local,
                    FieldArg::Mean => FieldModel::MeanField(mode),
                };
                Task::Trajectory(TrajectoryTask {
                    spec,
                    r0,
                    t_end,
                    samples,
                    forces: ForceSelection::new(terms, model),
                    rel_tol: positive("rel-tol", rel_tol)?,
                    abs_tol: positive("abs-tol", abs_tol)?,
                })
            }
            Command::Frames { particle, g, t } => {
                let spec = spec(&particle)?;
                if !g.is_finite() {
                    return Err(usage(format!("--g must be finite, got {g}")));
                }
                Task::Frames { spec, g, t: positive("t", t)? }
            }
            Command::SnMin { mass } => Task::SnMin { mass: positive("mass", mass)? },
            Command::SnEvolve { particle, dt, t_end, grid_points, domain, record_every, no_gravity } => {
                let spec = spec(&particle)?;
                let dt = positive("dt", dt)?;
                let t_end = positive("t-end", t_end)?;
                if !(domain >= MIN_DOMAIN_SIGMA && domain.is_finite()) {
                    return Err(usage(format!("--domain must be at least {MIN_DOMAIN_SIGMA}, got {domain}")));
                }
                if (grid_points as f64 + 1.0) / domain < MIN_POINTS_PER_SIGMA {
                    return Err(usage(format!(
                        "--grid-points gives fewer than {MIN_POINTS_PER_SIGMA} points per sigma0"
                    )));
                }
                if record_every == 0 {
                    return Err(usage("--record-every must be at least 1"));
                }
                let steps = (t_end / dt).round().max(1.0) as usize;
                Task::SnEvolve(SnEvolveTask {
                    spec,
                    dt,
                    steps,
                    grid_points,
                    domain,
                    record_every,
                    gravity: !no_gravity,
                })
            }
            Command::Sweep { vary, from, to, count, log, mass, sigma0 } => {
                let from = positive("from", from)?;
                let to = positive("to", to)?;
                if count == 0 {
                    return Err(usage("--count must be at least 1"));
                }
                let fixed = match vary {
                    SweepVar::Mass => {
                        if mass.is_some() {
                            return Err(usage("--mass is the swept variable"));
                        }
                        sigma0.map(|s| positive("sigma0", s)).transpose()?
                    }
                    SweepVar::Sigma0 => {
                        if sigma0.is_some() {
                            return Err(usage("--sigma0 is the swept variable"));
                        }
                        Some(positive("mass", mass.ok_or_else(|| usage("sweep over sigma0 requires --mass"))?)?)
                    }
                };
                Task::Sweep(SweepTask { vary, values: sweep_values(from, to, count, log), fixed, log })
            }
        };

        Ok(RunConfig {
            units,
            mode,
            format: cli.emit,
            output: cli.output,
            band: cli.band,
            threads,
            task,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> CliResult<RunConfig> {
        let cli = Cli::try_parse_from(std::iter::once("gravicol").chain(args.iter().copied())).unwrap();
        RunConfig::from_cli(cli, None)
    }

    #[test]
    fn sweep_grid() {
        let v = sweep_values(1e-18, 1e-16, 3, true);
        assert!((v[1] / 1e-17 - 1.0).abs() < 1e-12);
        assert_eq!(sweep_values(1.0, 3.0, 3, false), vec![1.0, 2.0, 3.0]);
        assert_eq!(sweep_values(2.0, 5.0, 1, true), vec![2.0]);
    }

    #[test]
    fn validation_errors_are_usage() {
        for args in [
            &["regime", "--mass", "-1", "--sigma0", "1"][..],
            &["collapse-time", "--mass", "1"],
            &["temperature", "--mass", "1", "--width", "compton"],
            &["temperature", "--mass", "1", "--width", "schwarzschild", "--g", "2"],
            &["sn-evolve", "--mass", "1", "--sigma0", "1", "--grid-points", "100"],
            &["sweep", "--vary", "sigma0", "--from", "1", "--to", "2", "--count", "3"],
            &["trajectory", "--mass", "1", "--sigma0", "1", "--r0", "9"],
            &["--band", "2", "regime", "--mass", "1", "--sigma0", "1"],
        ] {
            let e = parse(args).unwrap_err();
            assert_eq!(e.exit_code(), 2, "{args:?}");
        }
    }

    #[test]
    fn threads_env() {
        assert_eq!(threads_from_env(None).unwrap(), None);
        assert_eq!(threads_from_env(Some("3".into())).unwrap(), Some(3));
        assert!(threads_from_env(Some("0".into())).is_err());
        assert!(threads_from_env(Some("x".into())).is_err());
    }

    #[test]
    fn defaults() {
        let c = parse(&["sn-evolve", "--mass", "1", "--sigma0", "1"]).unwrap();
        assert_eq!(c.mode, PrefactorMode::ExactPrefactor);
        match c.task {
            Task::SnEvolve(t) => assert_eq!(t.steps, 1000),
            _ => unreachable!(),
        }
    }
}
