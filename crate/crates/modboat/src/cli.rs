//! Command-line front end.

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use modboat_core::experiments::{
    analyze, default_asymmetry_grid, default_phi0_grid, default_ratio_grid, plan_asymmetry,
    plan_phi0, plan_steering, reference_input,
};
use modboat_core::{
    derive_coeffs, simulate, AnalysisSettings, InputTuple, SimConfig, SweepKind, SweepTable,
    Trajectory, WindowMode,
};

use crate::params::{self, ParamFile, PARAMS_ENV};
use crate::tables::{self, ReportRow};
use crate::{mocap, plot, runner, trajectory_csv};

#[derive(Debug, Parser)]
#[command(
    name = "modboat",
    version,
    about = "Simulate and measure a single-actuator paddling boat"
)]
pub struct Cli {
    /// Parameter file of key=value lines
    #[arg(long, global = true, env = PARAMS_ENV, value_name = "FILE")]
    pub params: Option<PathBuf>,
    /// Read angles given on the command line in degrees (files stay in radians)
    #[arg(long, global = true)]
    pub degrees: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the parameters and derived drag coefficients
    Params {
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Run one simulation, write its trajectory and print a summary line
    Simulate {
        #[command(flatten)]
        sim: SimArgs,
        #[command(flatten)]
        fit: FitArgs,
        /// Trajectory CSV
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
        /// Trajectory SVG
        #[arg(long, value_name = "FILE")]
        plot: Option<PathBuf>,
    },
    /// Sweep the oscillation midpoint phi0
    #[command(name = "sweep-phi0")]
    SweepPhi0 {
        #[command(flatten)]
        sweep: SweepArgs,
        /// Comma-separated phi0 values (default -30..30 degrees in 5 degree steps)
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
    },
    /// Sweep the stroke ratio T1/T2 at the cycle period of --input
    #[command(name = "sweep-steer")]
    SweepSteer {
        #[command(flatten)]
        sweep: SweepArgs,
        /// Comma-separated T1/T2 ratios
        #[arg(long)]
        ratios: Option<String>,
    },
    /// Sweep the flipper thrust skew epsilon
    #[command(name = "sweep-asym")]
    SweepAsym {
        #[command(flatten)]
        sweep: SweepArgs,
        /// Comma-separated epsilon values
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
    },
    /// Measure a trajectory CSV or a motion-capture CSV
    Fit {
        #[arg(long = "in", value_name = "FILE")]
        input_file: PathBuf,
        #[command(flatten)]
        fit: FitArgs,
        /// Input tuple the data was recorded under; supplies the cycle period
        #[arg(long, value_name = "T1,T2,A,PHI0", allow_hyphen_values = true)]
        input: Option<String>,
        /// Row label (default: file stem)
        #[arg(long)]
        label: Option<String>,
        /// Report CSV
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Convert a motion-capture CSV into a trajectory CSV
    Ingest {
        #[arg(long = "in", value_name = "FILE")]
        input_file: PathBuf,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
    /// Render a trajectory or sweep CSV as SVG
    Plot {
        #[arg(long = "in", value_name = "FILE")]
        input_file: PathBuf,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
        /// Spacing of heading arrows on trajectory plots (s)
        #[arg(long, default_value_t = plot::ARROW_EVERY)]
        arrow_every: f64,
    },
}

#[derive(Debug, Args)]
pub struct SimArgs {
    /// Input tuple T1,T2,A,phi0
    #[arg(long, value_name = "T1,T2,A,PHI0", allow_hyphen_values = true)]
    pub input: Option<String>,
    /// Simulated time (s)
    #[arg(long, default_value_t = 30.0)]
    pub duration: f64,
    /// Integration step (s)
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
    /// Output rows per second
    #[arg(long, default_value_t = 120.0)]
    pub sample_rate: f64,
    /// Flipper thrust skew (overrides the parameter file)
    #[arg(long, allow_hyphen_values = true)]
    pub eps: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WindowArg {
    Fixed,
    Auto,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Initial transient to discard (s)
    #[arg(long, default_value_t = 10.0)]
    pub skip: f64,
    #[arg(long, value_enum, default_value_t = WindowArg::Fixed)]
    pub window: WindowArg,
    /// Radii beyond this are reported as truncated (m)
    #[arg(long, default_value_t = 4.0)]
    pub truncation: f64,
    /// Fit raw samples instead of the cycle-averaged path
    #[arg(long)]
    pub raw_fit: bool,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub sim: SimArgs,
    #[command(flatten)]
    pub fit: FitArgs,
    /// Sweep CSV (printed to stdout when absent)
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Sweep SVG
    #[arg(long, value_name = "FILE")]
    pub plot: Option<PathBuf>,
}

impl FitArgs {
    fn settings(&self) -> AnalysisSettings {
        AnalysisSettings {
            settle_skip: self.skip,
            window_mode: match self.window {
                WindowArg::Fixed => WindowMode::Fixed,
                WindowArg::Auto => WindowMode::Auto,
            },
            truncation: self.truncation,
            cycle_average: !self.raw_fit,
        }
    }
}

impl SimArgs {
    fn config(&self) -> SimConfig {
        SimConfig {
            dt: self.dt,
            duration: self.duration,
            sample_rate: self.sample_rate,
            ..SimConfig::default()
        }
    }
}

fn angle(v: f64, degrees: bool) -> f64 {
    if degrees {
        v.to_radians()
    } else {
        v
    }
}

fn parse_input(text: Option<&str>, degrees: bool) -> Result<InputTuple> {
    let Some(text) = text else {
        return Ok(reference_input());
    };
    let u: InputTuple = text
        .parse()
        .with_context(|| format!("invalid --input `{text}`"))?;
    if !degrees {
        return Ok(u);
    }
    Ok(InputTuple::new(
        u.t1(),
        u.t2(),
        angle(u.amplitude(), true),
        angle(u.midpoint(), true),
    )?)
}

fn parse_list(text: &str, what: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .with_context(|| format!("invalid {what} value `{}`", s.trim()))
        })
        .collect()
}

fn load_params(path: Option<&Path>) -> Result<ParamFile> {
    match path {
        Some(p) => params::load(p).with_context(|| format!("parameter file {}", p.display())),
        None => Ok(ParamFile::default()),
    }
}

fn summary(traj: &Trajectory, settings: &AnalysisSettings, hull: f64) -> String {
    let end = traj.end_time().unwrap_or(0.0);
    let mut s = format!("rows={} t_end={end}", traj.len());
    match analyze(traj, settings, hull) {
        Ok((_, r, m)) => s.push_str(&format!(
            " signed_radius={:?} truncated={} fitted_radius={:?} rms_residual={:?} mean_speed={:?} net_heading_drift={:?}",
            r.signed_radius, r.truncated, r.fitted_radius, r.rms_residual, m.mean_speed, m.net_heading_drift
        )),
        Err(e) => s.push_str(&format!(" signed_radius=unavailable ({e})")),
    }
    s
}

fn finish_sweep(table: &SweepTable, args: &SweepArgs, out: &mut dyn Write) -> Result<()> {
    match &args.out {
        Some(path) => {
            tables::save_sweep(table, path)?;
            writeln!(out, "wrote {} rows to {}", table.rows.len(), path.display())?;
        }
        None => tables::write_sweep(table, &mut *out)?,
    }
    if let Some(path) = &args.plot {
        plot::save(&plot::sweep_svg(table)?, path)?;
    }
    Ok(())
}

fn load_any(path: &Path) -> Result<Trajectory> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    if trajectory_csv::looks_like_trajectory(&text) {
        Ok(trajectory_csv::read_trajectory(text.as_bytes())?)
    } else {
        Ok(mocap::ingest(text.as_bytes())?.trajectory)
    }
}

/// Executes one parsed command, writing user-facing output to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    let pf = load_params(cli.params.as_deref())?;
    let p = pf.params;
    let deg = cli.degrees;
    match &cli.command {
        Command::Params { out: path } => {
            let text = params::render(&pf);
            derive_coeffs(&p)?;
            match path {
                Some(path) => std::fs::write(path, &text)
                    .with_context(|| format!("writing {}", path.display()))?,
                None => out.write_all(text.as_bytes())?,
            }
        }
        Command::Simulate {
            sim,
            fit,
            out: path,
            plot: svg,
        } => {
            let u = parse_input(sim.input.as_deref(), deg)?;
            let eps = ParamFile {
                epsilon: sim.eps.unwrap_or(pf.epsilon),
                ..pf
            }
            .asymmetry()?;
            let traj = simulate(&p, eps, &u, &sim.config())?;
            if let Some(path) = path {
                trajectory_csv::save(&traj, path)?;
            }
            if let Some(svg) = svg {
                plot::save(&plot::trajectory_svg(&traj, plot::ARROW_EVERY)?, svg)?;
            }
            writeln!(out, "{}", summary(&traj, &fit.settings(), p.hull_diameter))?;
        }
        Command::SweepPhi0 { sweep, grid } => {
            let u = parse_input(sweep.sim.input.as_deref(), deg)?;
            let grid = match grid {
                Some(g) => parse_list(g, "phi0")?
                    .into_iter()
                    .map(|v| angle(v, deg))
                    .collect(),
                None => default_phi0_grid(),
            };
            let eps = ParamFile {
                epsilon: sweep.sim.eps.unwrap_or(pf.epsilon),
                ..pf
            }
            .asymmetry()?;
            let jobs = plan_phi0(
                &grid,
                &u,
                &p,
                eps,
                &sweep.sim.config(),
                &sweep.fit.settings(),
            )?;
            let table = runner::run_sweep(SweepKind::Phi0, u, &p, &jobs)?;
            finish_sweep(&table, sweep, out)?;
        }
        Command::SweepSteer { sweep, ratios } => {
            let u = parse_input(sweep.sim.input.as_deref(), deg)?;
            let ratios = match ratios {
                Some(r) => parse_list(r, "ratio")?,
                None => default_ratio_grid(),
            };
            let eps = ParamFile {
                epsilon: sweep.sim.eps.unwrap_or(pf.epsilon),
                ..pf
            }
            .asymmetry()?;
            let jobs = plan_steering(
                &ratios,
                u.period(),
                u.amplitude(),
                u.midpoint(),
                &p,
                eps,
                &sweep.sim.config(),
                &sweep.fit.settings(),
            )?;
            let base = InputTuple::with_ratio(1.0, u.period(), u.amplitude(), u.midpoint())?;
            let table = runner::run_sweep(SweepKind::Steering, base, &p, &jobs)?;
            finish_sweep(&table, sweep, out)?;
        }
        Command::SweepAsym { sweep, grid } => {
            if sweep.sim.eps.is_some() {
                bail!("--eps conflicts with sweep-asym; use --grid");
            }
            let u = parse_input(sweep.sim.input.as_deref(), deg)?;
            let grid = match grid {
                Some(g) => parse_list(g, "epsilon")?,
                None => default_asymmetry_grid(),
            };
            let jobs = plan_asymmetry(&grid, &u, &p, &sweep.sim.config(), &sweep.fit.settings())?;
            let table = runner::run_sweep(SweepKind::Asymmetry, u, &p, &jobs)?;
            finish_sweep(&table, sweep, out)?;
        }
        Command::Fit {
            input_file,
            fit,
            input,
            label,
            out: path,
        } => {
            let mut traj = load_any(input_file)?;
            if let Some(text) = input {
                traj.meta.input = Some(parse_input(Some(text), deg)?);
            }
            let (_, report, metrics) = analyze(&traj, &fit.settings(), p.hull_diameter)
                .with_context(|| format!("analysing {}", input_file.display()))?;
            let label = label.clone().unwrap_or_else(|| {
                input_file
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_default()
            });
            let row = ReportRow {
                label,
                report,
                metrics,
            };
            writeln!(out, "{}", tables::REPORT_COLUMNS.join(","))?;
            writeln!(out, "{}", tables::report_line(&row))?;
            if let Some(path) = path {
                tables::save_reports(std::slice::from_ref(&row), path)?;
            }
        }
        Command::Ingest {
            input_file,
            out: path,
        } => {
            let ing = mocap::ingest_file(input_file)?;
            trajectory_csv::save(&ing.trajectory, path)?;
            writeln!(
                out,
                "rows={} dropped={} gaps={} nominal_dt={}",
                ing.trajectory.len(),
                ing.dropped,
                ing.gaps.len(),
                ing.nominal_dt
            )?;
        }
        Command::Plot {
            input_file,
            out: path,
            arrow_every,
        } => {
            let text = std::fs::read_to_string(input_file)
                .with_context(|| format!("reading {}", input_file.display()))?;
            let svg = if tables::looks_like_sweep(&text) {
                plot::sweep_svg(&tables::read_sweep(&text)?)?
            } else if trajectory_csv::looks_like_trajectory(&text) {
                plot::trajectory_svg(
                    &trajectory_csv::read_trajectory(text.as_bytes())?,
                    *arrow_every,
                )?
            } else {
                bail!(
                    "{} is neither a trajectory nor a sweep CSV",
                    input_file.display()
                );
            };
            plot::save(&svg, path)?;
        }
    }
    Ok(())
}
