//! Batch experiments: midpoint, steering and asymmetry sweeps.
//!
//! Every sweep is planned as a list of independent [`SweepJob`]s, so callers
//! with threads can run them in parallel and hand the rows back to
//! [`SweepTable::from_rows`]. Rows are stored in ascending swept value.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use thiserror::Error;

use crate::analysis::{
    curvature_report, motion_metrics, select_window, AnalysisError, CurvatureReport, MotionMetrics,
    ReportOptions, WindowMode, WindowSpec, DEFAULT_TRUNCATION,
};
use crate::integrator::{simulate, SimConfig, SimError};
use crate::model::{deg_to_rad, Asymmetry, BoatParams, ModelError};
use crate::trajectory::Trajectory;
use crate::waveform::{InputTuple, WaveformError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExperimentError {
    #[error("sweep grid is empty")]
    EmptyGrid,
    #[error("sweep grid value {0} is repeated or not finite")]
    BadGridValue(f64),
    #[error("period ratio must be > 0, got {0}")]
    InvalidRatio(f64),
    #[error("unknown sweep kind `{0}`")]
    UnknownKind(alloc::string::String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Waveform(#[from] WaveformError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
}

/// How each run is measured.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalysisSettings {
    /// Initial transient discarded before fitting (s).
    pub settle_skip: f64,
    pub window_mode: WindowMode,
    /// Radii beyond this are reported as truncated (m).
    pub truncation: f64,
    /// Fit the cycle-averaged path rather than raw samples.
    pub cycle_average: bool,
}

impl Default for AnalysisSettings {
    fn default() -> Self {
        AnalysisSettings {
            settle_skip: 10.0,
            window_mode: WindowMode::Fixed,
            truncation: DEFAULT_TRUNCATION,
            cycle_average: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepKind {
    Phi0,
    Steering,
    Asymmetry,
}

impl fmt::Display for SweepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepKind::Phi0 => "phi0",
            SweepKind::Steering => "steering",
            SweepKind::Asymmetry => "asymmetry",
        })
    }
}

impl FromStr for SweepKind {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "phi0" => Ok(SweepKind::Phi0),
            "steering" => Ok(SweepKind::Steering),
            "asymmetry" => Ok(SweepKind::Asymmetry),
            other => Err(ExperimentError::UnknownKind(other.into())),
        }
    }
}

/// One grid point: a fully specified simulation plus its analysis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepJob {
    pub value: f64,
    pub params: BoatParams,
    pub asymmetry: Asymmetry,
    pub input: InputTuple,
    pub config: SimConfig,
    pub settings: AnalysisSettings,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub swept_value: f64,
    pub report: CurvatureReport,
    pub metrics: MotionMetrics,
}

impl SweepRow {
    pub fn signed_radius(&self) -> f64 {
        self.report.signed_radius
    }

    pub fn truncated(&self) -> bool {
        self.report.truncated
    }
}

/// Window, curvature report and motion metrics of one trajectory.
pub fn analyze(
    traj: &Trajectory,
    settings: &AnalysisSettings,
    hull_diameter: f64,
) -> Result<(WindowSpec, CurvatureReport, MotionMetrics), ExperimentError> {
    let window = select_window(traj, settings.settle_skip, settings.window_mode)?;
    let opts = ReportOptions {
        truncation: settings.truncation,
        hull_diameter,
        cycle_average: settings.cycle_average,
    };
    let report = curvature_report(traj, &window, &opts)?;
    let metrics = motion_metrics(traj, &window)?;
    Ok((window, report, metrics))
}

impl SweepJob {
    pub fn run(&self) -> Result<SweepRow, ExperimentError> {
        let traj = simulate(&self.params, self.asymmetry, &self.input, &self.config)?;
        let (_, report, metrics) = analyze(&traj, &self.settings, self.params.hull_diameter)?;
        Ok(SweepRow {
            swept_value: self.value,
            report,
            metrics,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub kind: SweepKind,
    /// Input at the centre of the sweep (for steering: ratio 1).
    pub base: InputTuple,
    pub params_digest: u64,
    pub hull_diameter: f64,
    pub truncation: f64,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    /// Sorts rows by swept value; rejects repeated values.
    pub fn from_rows(
        kind: SweepKind,
        base: InputTuple,
        params: &BoatParams,
        truncation: f64,
        mut rows: Vec<SweepRow>,
    ) -> Result<Self, ExperimentError> {
        if rows.is_empty() {
            return Err(ExperimentError::EmptyGrid);
        }
        rows.sort_by(|a, b| a.swept_value.total_cmp(&b.swept_value));
        for w in rows.windows(2) {
            if w[0].swept_value == w[1].swept_value {
                return Err(ExperimentError::BadGridValue(w[1].swept_value));
            }
        }
        Ok(SweepTable {
            kind,
            base,
            params_digest: params.digest(),
            hull_diameter: params.hull_diameter,
            truncation,
            rows,
        })
    }

    pub fn grid(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.swept_value).collect()
    }
}

fn check_grid(grid: &[f64]) -> Result<(), ExperimentError> {
    if grid.is_empty() {
        return Err(ExperimentError::EmptyGrid);
    }
    for (i, v) in grid.iter().enumerate() {
        if !v.is_finite() || grid[..i].contains(v) {
            return Err(ExperimentError::BadGridValue(*v));
        }
    }
    Ok(())
}

/// Jobs varying the oscillation midpoint `phi0` (rad).
pub fn plan_phi0(
    grid: &[f64],
    base: &InputTuple,
    p: &BoatParams,
    eps: Asymmetry,
    c: &SimConfig,
    settings: &AnalysisSettings,
) -> Result<Vec<SweepJob>, ExperimentError> {
    check_grid(grid)?;
    p.validate()?;
    Ok(grid
        .iter()
        .map(|&phi0| SweepJob {
            value: phi0,
            params: *p,
            asymmetry: eps,
            input: base.with_midpoint(phi0),
            config: *c,
            settings: *settings,
        })
        .collect())
}

/// Jobs varying `T1 / T2` at fixed cycle period.
#[allow(clippy::too_many_arguments)]
pub fn plan_steering(
    ratios: &[f64],
    period: f64,
    amplitude: f64,
    phi0: f64,
    p: &BoatParams,
    eps: Asymmetry,
    c: &SimConfig,
    settings: &AnalysisSettings,
) -> Result<Vec<SweepJob>, ExperimentError> {
    check_grid(ratios)?;
    p.validate()?;
    ratios
        .iter()
        .map(|&ratio| {
            if ratio.is_nan() || ratio <= 0.0 {
                return Err(ExperimentError::InvalidRatio(ratio));
            }
            Ok(SweepJob {
                value: ratio,
                params: *p,
                asymmetry: eps,
                input: InputTuple::with_ratio(ratio, period, amplitude, phi0)?,
                config: *c,
                settings: *settings,
            })
        })
        .collect()
}

/// Jobs varying the flipper thrust skew.
pub fn plan_asymmetry(
    eps_grid: &[f64],
    base: &InputTuple,
    p: &BoatParams,
    c: &SimConfig,
    settings: &AnalysisSettings,
) -> Result<Vec<SweepJob>, ExperimentError> {
    check_grid(eps_grid)?;
    p.validate()?;
    eps_grid
        .iter()
        .map(|&eps| {
            Ok(SweepJob {
                value: eps,
                params: *p,
                asymmetry: Asymmetry::new(eps)?,
                input: *base,
                config: *c,
                settings: *settings,
            })
        })
        .collect()
}

fn run_all(jobs: &[SweepJob]) -> Result<Vec<SweepRow>, ExperimentError> {
    jobs.iter().map(SweepJob::run).collect()
}

pub fn sweep_phi0(
    grid: &[f64],
    base: &InputTuple,
    p: &BoatParams,
    eps: Asymmetry,
    c: &SimConfig,
    settings: &AnalysisSettings,
) -> Result<SweepTable, ExperimentError> {
    let jobs = plan_phi0(grid, base, p, eps, c, settings)?;
    SweepTable::from_rows(
        SweepKind::Phi0,
        *base,
        p,
        settings.truncation,
        run_all(&jobs)?,
    )
}

#[allow(clippy::too_many_arguments)]
pub fn sweep_steering(
    ratios: &[f64],
    period: f64,
    amplitude: f64,
    phi0: f64,
    p: &BoatParams,
    eps: Asymmetry,
    c: &SimConfig,
    settings: &AnalysisSettings,
) -> Result<SweepTable, ExperimentError> {
    let jobs = plan_steering(ratios, period, amplitude, phi0, p, eps, c, settings)?;
    let base = InputTuple::with_ratio(1.0, period, amplitude, phi0)?;
    SweepTable::from_rows(
        SweepKind::Steering,
        base,
        p,
        settings.truncation,
        run_all(&jobs)?,
    )
}

pub fn sweep_asymmetry(
    eps_grid: &[f64],
    base: &InputTuple,
    p: &BoatParams,
    c: &SimConfig,
    settings: &AnalysisSettings,
) -> Result<SweepTable, ExperimentError> {
    let jobs = plan_asymmetry(eps_grid, base, p, c, settings)?;
    SweepTable::from_rows(
        SweepKind::Asymmetry,
        *base,
        p,
        settings.truncation,
        run_all(&jobs)?,
    )
}

/// `phi0` from -30° to 30° in 5° steps, in radians.
pub fn default_phi0_grid() -> Vec<f64> {
    (-6..=6).map(|k| deg_to_rad(5.0 * k as f64)).collect()
}

pub fn default_ratio_grid() -> Vec<f64> {
    alloc::vec![0.8, 0.9, 0.95, 1.0, 1.05, 1.1, 1.25]
}

pub fn default_asymmetry_grid() -> Vec<f64> {
    alloc::vec![-0.2, -0.1, -0.05, -0.02, 0.0, 0.02, 0.05, 0.1, 0.2]
}

/// The canonical symmetric input `(1, 1, 2, 0)`.
pub fn reference_input() -> InputTuple {
    InputTuple::new(1.0, 1.0, 2.0, 0.0).expect("constant input is valid")
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceRun {
    pub trajectory: Trajectory,
    pub window: WindowSpec,
    pub report: CurvatureReport,
    pub metrics: MotionMetrics,
}

/// The symmetric straight-line run from rest with input `(1, 1, 2, 0)`.
pub fn reproduce_reference_run(
    p: &BoatParams,
    c: &SimConfig,
    settings: &AnalysisSettings,
) -> Result<ReferenceRun, ExperimentError> {
    let trajectory = simulate(p, Asymmetry::NONE, &reference_input(), c)?;
    let (window, report, metrics) = analyze(&trajectory, settings, p.hull_diameter)?;
    Ok(ReferenceRun {
        trajectory,
        window,
        report,
        metrics,
    })
}
