//! Curvature measurement of planar trajectories.
//!
//! A circle is fitted to a window of the path with Taubin's algebraic method
//! and signed by the direction the path sweeps around the fitted centre:
//! counterclockwise positive, clockwise negative. Radii beyond a truncation
//! threshold are reported as truncated, because near-straight paths make the
//! radius a poor measure.

use alloc::vec::Vec;

use libm::{fabs, hypot, sqrt};
use thiserror::Error;

use crate::trajectory::{Trajectory, TrajectoryRow};

/// Ratio of smallest to largest singular value of the centred point cloud
/// below which the points count as collinear.
pub const COLLINEAR_TOLERANCE: f64 = 1e-12;

/// Fitted radii larger than this multiple of the point spread are treated as
/// straight segments.
const MAX_RADIUS_RATIO: f64 = 1e12;

/// Default truncation threshold (m).
pub const DEFAULT_TRUNCATION: f64 = 4.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("circle fit needs at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("non-finite point in fit input")]
    NonFinite,
    #[error("degenerate: straight segment")]
    StraightSegment,
    #[error("orientation indeterminate")]
    OrientationIndeterminate,
    #[error("trajectory too short: {0}")]
    TooShort(&'static str),
    #[error("truncation must be finite and > 0, got {0}")]
    InvalidTruncation(f64),
    #[error("invalid window [{t_start}, {t_end}]")]
    InvalidWindow { t_start: f64, t_end: f64 },
}

/// Unsigned circle fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleFit {
    pub center_x: f64,
    pub center_y: f64,
    pub radius: f64,
    /// Root-mean-square distance of the points from the fitted circle.
    pub rms_residual: f64,
    pub n_points: usize,
}

/// Circle fit plus the orientation-signed radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrientedFit {
    pub fit: CircleFit,
    pub signed_radius: f64,
}

/// Right singular vectors and singular values of an `n x 3` matrix stored
/// as columns, by one-sided Jacobi rotations.
fn svd3(mut cols: [Vec<f64>; 3]) -> ([f64; 3], [[f64; 3]; 3]) {
    let mut v = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    for _sweep in 0..64 {
        let mut rotated = false;
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let alpha: f64 = cols[i].iter().map(|a| a * a).sum();
            let beta: f64 = cols[j].iter().map(|b| b * b).sum();
            let gamma: f64 = cols[i].iter().zip(&cols[j]).map(|(a, b)| a * b).sum();
            if gamma == 0.0 || fabs(gamma) <= 1e-15 * sqrt(alpha * beta) {
                continue;
            }
            rotated = true;
            let zeta = (beta - alpha) / (2.0 * gamma);
            let t = zeta.signum() / (fabs(zeta) + sqrt(1.0 + zeta * zeta));
            let c = 1.0 / sqrt(1.0 + t * t);
            let s = c * t;
            let (left, right) = cols.split_at_mut(j);
            for (a, b) in left[i].iter_mut().zip(right[0].iter_mut()) {
                let (ai, bj) = (*a, *b);
                *a = c * ai - s * bj;
                *b = s * ai + c * bj;
            }
            for row in v.iter_mut() {
                let (ai, bj) = (row[i], row[j]);
                row[i] = c * ai - s * bj;
                row[j] = s * ai + c * bj;
            }
        }
        if !rotated {
            break;
        }
    }
    let sigma = [0, 1, 2].map(|k| sqrt(cols[k].iter().map(|a| a * a).sum::<f64>()));
    (sigma, v)
}

/// Eigenvalues (ascending) of a 2x2 symmetric matrix `[[a, b], [b, c]]`.
fn sym2_eigen(a: f64, b: f64, c: f64) -> (f64, f64) {
    let mean = 0.5 * (a + c);
    let dev = hypot(0.5 * (a - c), b);
    (mean - dev, mean + dev)
}

/// Taubin algebraic circle fit.
///
/// Points are centred on their centroid and scaled to unit RMS spread before
/// the fit, so the result is invariant under rigid motions and scales
/// exactly with the data.
pub fn fit_circle(points: &[[f64; 2]]) -> Result<CircleFit, AnalysisError> {
    let n = points.len();
    if n < 3 {
        return Err(AnalysisError::TooFewPoints(n));
    }
    if points
        .iter()
        .any(|p| !(p[0].is_finite() && p[1].is_finite()))
    {
        return Err(AnalysisError::NonFinite);
    }
    let nf = n as f64;
    let mx = points.iter().map(|p| p[0]).sum::<f64>() / nf;
    let my = points.iter().map(|p| p[1]).sum::<f64>() / nf;

    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for p in points {
        let (dx, dy) = (p[0] - mx, p[1] - my);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    let (lo, hi) = sym2_eigen(sxx, sxy, syy);
    if hi <= 0.0 || sqrt(lo.max(0.0) / hi) < COLLINEAR_TOLERANCE {
        return Err(AnalysisError::StraightSegment);
    }
    let scale = sqrt((sxx + syy) / nf);

    let mut zcol = Vec::with_capacity(n);
    let mut xcol = Vec::with_capacity(n);
    let mut ycol = Vec::with_capacity(n);
    for p in points {
        let x = (p[0] - mx) / scale;
        let y = (p[1] - my) / scale;
        xcol.push(x);
        ycol.push(y);
        zcol.push(x * x + y * y);
    }
    let zmean = zcol.iter().sum::<f64>() / nf;
    let zscale = 2.0 * sqrt(zmean);
    for z in zcol.iter_mut() {
        *z = (*z - zmean) / zscale;
    }

    let (sigma, v) = svd3([zcol, xcol, ycol]);
    let smallest = (0..3)
        .min_by(|&a, &b| sigma[a].total_cmp(&sigma[b]))
        .unwrap_or(0);
    let a0 = v[0][smallest] / zscale;
    let a1 = v[1][smallest];
    let a2 = v[2][smallest];
    let a3 = -zmean * a0;
    let disc = a1 * a1 + a2 * a2 - 4.0 * a0 * a3;
    if a0 == 0.0 || disc <= 0.0 {
        return Err(AnalysisError::StraightSegment);
    }
    let radius_unit = sqrt(disc) / (2.0 * fabs(a0));
    if !(radius_unit.is_finite() && radius_unit < MAX_RADIUS_RATIO) {
        return Err(AnalysisError::StraightSegment);
    }
    let center_x = mx + scale * (-a1 / (2.0 * a0));
    let center_y = my + scale * (-a2 / (2.0 * a0));
    let radius = scale * radius_unit;

    let sq = points
        .iter()
        .map(|p| {
            let d = hypot(p[0] - center_x, p[1] - center_y) - radius;
            d * d
        })
        .sum::<f64>();
    Ok(CircleFit {
        center_x,
        center_y,
        radius,
        rms_residual: sqrt(sq / nf),
        n_points: n,
    })
}

/// RMS distance of the points from their total-least-squares line.
pub fn line_residual(points: &[[f64; 2]]) -> f64 {
    let n = points.len();
    if n == 0 {
        return 0.0;
    }
    let nf = n as f64;
    let mx = points.iter().map(|p| p[0]).sum::<f64>() / nf;
    let my = points.iter().map(|p| p[1]).sum::<f64>() / nf;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for p in points {
        let (dx, dy) = (p[0] - mx, p[1] - my);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    let (lo, _) = sym2_eigen(sxx, sxy, syy);
    sqrt(lo.max(0.0) / nf)
}

/// Radius signed by how the time-ordered points sweep around the fitted
/// centre: the sum of cross products of successive centre-to-point vectors.
pub fn signed_radius(fit: &CircleFit, points: &[[f64; 2]]) -> Result<f64, AnalysisError> {
    let mut sweep = 0.0;
    for w in points.windows(2) {
        let (ax, ay) = (w[0][0] - fit.center_x, w[0][1] - fit.center_y);
        let (bx, by) = (w[1][0] - fit.center_x, w[1][1] - fit.center_y);
        sweep += ax * by - ay * bx;
    }
    if sweep > 0.0 {
        Ok(fit.radius)
    } else if sweep < 0.0 {
        Ok(-fit.radius)
    } else {
        Err(AnalysisError::OrientationIndeterminate)
    }
}

pub fn fit_oriented(points: &[[f64; 2]]) -> Result<OrientedFit, AnalysisError> {
    let fit = fit_circle(points)?;
    let signed_radius = signed_radius(&fit, points)?;
    Ok(OrientedFit { fit, signed_radius })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WindowMode {
    /// From the settle time to the end of the trajectory.
    #[default]
    Fixed,
    /// The half-length window with the smallest arc-normalised fit residual.
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowSpec {
    pub t_start: f64,
    pub t_end: f64,
    pub mode: WindowMode,
}

impl WindowSpec {
    pub fn fixed(t_start: f64, t_end: f64) -> Result<Self, AnalysisError> {
        if !(t_start.is_finite() && t_end.is_finite() && t_end > t_start) {
            return Err(AnalysisError::InvalidWindow { t_start, t_end });
        }
        Ok(WindowSpec {
            t_start,
            t_end,
            mode: WindowMode::Fixed,
        })
    }

    pub fn rows<'a>(&self, traj: &'a Trajectory) -> &'a [TrajectoryRow] {
        traj.window(self.t_start, self.t_end)
    }

    pub fn points(&self, traj: &Trajectory) -> Vec<[f64; 2]> {
        self.rows(traj)
            .iter()
            .map(TrajectoryRow::position)
            .collect()
    }
}

/// Number of candidate offsets tried by [`WindowMode::Auto`].
const AUTO_POSITIONS: usize = 20;

fn arc_length(points: &[[f64; 2]]) -> f64 {
    points
        .windows(2)
        .map(|w| hypot(w[1][0] - w[0][0], w[1][1] - w[0][1]))
        .sum()
}

/// Chooses the analysis window after discarding the first `settle_skip`
/// seconds. The trajectory must extend at least two input cycles past the
/// skip when its input is known.
pub fn select_window(
    traj: &Trajectory,
    settle_skip: f64,
    mode: WindowMode,
) -> Result<WindowSpec, AnalysisError> {
    let (Some(first), Some(end)) = (traj.start_time(), traj.end_time()) else {
        return Err(AnalysisError::TooShort("empty trajectory"));
    };
    if !(settle_skip.is_finite() && settle_skip >= 0.0) {
        return Err(AnalysisError::InvalidWindow {
            t_start: settle_skip,
            t_end: end,
        });
    }
    let start = first + settle_skip;
    let min_span = 2.0 * traj.cycle_period().unwrap_or(0.0);
    if end - start <= min_span || traj.window(start, end).len() < 3 {
        return Err(AnalysisError::TooShort(
            "needs more than two cycles and three samples after the settle skip",
        ));
    }
    let fixed = WindowSpec::fixed(start, end)?;
    if mode == WindowMode::Fixed {
        return Ok(fixed);
    }

    let width = 0.5 * (end - start);
    let stride = (end - start - width) / AUTO_POSITIONS as f64;
    let mut best: Option<(f64, WindowSpec)> = None;
    for i in 0..=AUTO_POSITIONS {
        let t0 = if i == AUTO_POSITIONS {
            end - width
        } else {
            start + i as f64 * stride
        };
        let candidate = WindowSpec {
            t_start: t0,
            t_end: t0 + width,
            mode: WindowMode::Auto,
        };
        let pts = candidate.points(traj);
        let Ok(fit) = fit_circle(&pts) else {
            continue;
        };
        let arc = arc_length(&pts);
        if arc <= 0.0 {
            continue;
        }
        let score = fit.rms_residual / arc;
        if best.is_none_or(|(s, _)| score < s) {
            best = Some((score, candidate));
        }
    }
    Ok(best.map(|(_, w)| w).unwrap_or(fixed))
}

/// One curvature measurement, following the truncation convention.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureReport {
    /// Signed radius (m). Clipped to `±truncation` when truncated; NaN when
    /// the path is a straight segment and carries no sign.
    pub signed_radius: f64,
    /// Unclipped fitted radius (m), infinite for a straight segment.
    pub fitted_radius: f64,
    pub truncated: bool,
    pub rms_residual: f64,
    pub n_points: usize,
    pub t_start: f64,
    pub t_end: f64,
    pub truncation: f64,
    /// Hull diameter reference line (m).
    pub hull_diameter: f64,
}

impl CurvatureReport {
    /// `+1`, `-1`, or `None` when the sign is indeterminate.
    pub fn orientation(&self) -> Option<i8> {
        if self.signed_radius > 0.0 {
            Some(1)
        } else if self.signed_radius < 0.0 {
            Some(-1)
        } else {
            None
        }
    }
}

/// Options for [`curvature_report`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReportOptions {
    /// Radii beyond this are reported as truncated (m).
    pub truncation: f64,
    /// Hull diameter reference line carried into the report (m).
    pub hull_diameter: f64,
    /// Fit the one-cycle moving average of the path instead of the raw
    /// samples when the input cycle is known.
    pub cycle_average: bool,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            truncation: DEFAULT_TRUNCATION,
            hull_diameter: 0.1524,
            cycle_average: true,
        }
    }
}

/// Mean position over `[t - period/2, t + period/2]` for every window row
/// whose averaging span lies inside the window.
///
/// The mean is a trapezoidal integral with linear interpolation at the span
/// ends. On a uniform grid with an integer number of samples per period it
/// removes every harmonic of the paddling cycle the grid can represent.
pub fn cycle_averaged_points(rows: &[TrajectoryRow], period: f64) -> Vec<[f64; 2]> {
    let mut out = Vec::new();
    if rows.len() < 2 || period.is_nan() || period <= 0.0 {
        return out;
    }
    let half = 0.5 * period;
    let first = rows[0].t;
    let last = rows[rows.len() - 1].t;
    let slack = 1e-9 * (1.0 + last.abs());
    let lerp = |a: &TrajectoryRow, b: &TrajectoryRow, t: f64| {
        let f = if b.t > a.t {
            (t - a.t) / (b.t - a.t)
        } else {
            0.0
        };
        [a.x + f * (b.x - a.x), a.y + f * (b.y - a.y)]
    };
    for (i, centre) in rows.iter().enumerate() {
        let (lo_t, hi_t) = (centre.t - half, centre.t + half);
        if lo_t < first - slack || hi_t > last + slack {
            continue;
        }
        let lo_t = lo_t.max(first);
        let hi_t = hi_t.min(last);
        // last row at or before lo_t, first row at or after hi_t
        let lo = rows[..=i]
            .partition_point(|r| r.t <= lo_t + slack)
            .saturating_sub(1);
        let hi = i + rows[i..].partition_point(|r| r.t < hi_t - slack);
        let hi = hi.min(rows.len() - 1);
        let mut pts: Vec<(f64, [f64; 2])> = Vec::with_capacity(hi - lo + 2);
        let start = if (rows[lo].t - lo_t).abs() <= slack {
            rows[lo].position()
        } else {
            lerp(&rows[lo], &rows[lo + 1], lo_t)
        };
        pts.push((lo_t, start));
        for r in &rows[lo + 1..hi] {
            pts.push((r.t, r.position()));
        }
        let end = if (rows[hi].t - hi_t).abs() <= slack {
            rows[hi].position()
        } else {
            lerp(&rows[hi - 1], &rows[hi], hi_t)
        };
        pts.push((hi_t, end));
        let (mut ax, mut ay) = (0.0, 0.0);
        for w in pts.windows(2) {
            let dt = w[1].0 - w[0].0;
            ax += 0.5 * dt * (w[0].1[0] + w[1].1[0]);
            ay += 0.5 * dt * (w[0].1[1] + w[1].1[1]);
        }
        let span = hi_t - lo_t;
        out.push([ax / span, ay / span]);
    }
    out
}

/// Points the curvature fit uses for a window under `opts`.
pub fn fit_points(traj: &Trajectory, w: &WindowSpec, opts: &ReportOptions) -> Vec<[f64; 2]> {
    let rows = w.rows(traj);
    match traj.cycle_period() {
        Some(period) if opts.cycle_average => {
            let pts = cycle_averaged_points(rows, period);
            if pts.len() >= 3 {
                pts
            } else {
                rows.iter().map(TrajectoryRow::position).collect()
            }
        }
        _ => rows.iter().map(TrajectoryRow::position).collect(),
    }
}

/// Fits the window and applies the truncation convention.
pub fn curvature_report(
    traj: &Trajectory,
    w: &WindowSpec,
    opts: &ReportOptions,
) -> Result<CurvatureReport, AnalysisError> {
    let truncation = opts.truncation;
    if !(truncation.is_finite() && truncation > 0.0) {
        return Err(AnalysisError::InvalidTruncation(truncation));
    }
    let pts = fit_points(traj, w, opts);
    let report = |signed_radius, fitted_radius, truncated, rms_residual| CurvatureReport {
        signed_radius,
        fitted_radius,
        truncated,
        rms_residual,
        n_points: pts.len(),
        t_start: w.t_start,
        t_end: w.t_end,
        truncation,
        hull_diameter: opts.hull_diameter,
    };
    match fit_circle(&pts) {
        Ok(fit) => {
            let truncated = fit.radius > truncation;
            match signed_radius(&fit, &pts) {
                Ok(r) if truncated => Ok(report(
                    truncation.copysign(r),
                    fit.radius,
                    true,
                    fit.rms_residual,
                )),
                Ok(r) => Ok(report(r, fit.radius, false, fit.rms_residual)),
                Err(_) if truncated => Ok(report(f64::NAN, fit.radius, true, fit.rms_residual)),
                Err(e) => Err(e),
            }
        }
        Err(AnalysisError::StraightSegment) => {
            Ok(report(f64::NAN, f64::INFINITY, true, line_residual(&pts)))
        }
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MotionMetrics {
    /// Mean centre-of-mass speed over the window (m/s).
    pub mean_speed: f64,
    /// Cycle-averaged heading at the end minus that at the start (rad).
    pub net_heading_drift: f64,
    /// Mean net displacement per input cycle (m). `None` when the window is
    /// shorter than one cycle or the cycle is unknown.
    pub cycle_displacement: Option<f64>,
}

fn mean_theta(rows: &[TrajectoryRow]) -> f64 {
    rows.iter().map(|r| r.theta).sum::<f64>() / rows.len() as f64
}

fn nearest_row(rows: &[TrajectoryRow], t: f64) -> &TrajectoryRow {
    let idx = rows.partition_point(|r| r.t < t);
    match (idx.checked_sub(1).map(|i| &rows[i]), rows.get(idx)) {
        (Some(a), Some(b)) => {
            if t - a.t <= b.t - t {
                a
            } else {
                b
            }
        }
        (Some(a), None) => a,
        (None, Some(b)) => b,
        (None, None) => unreachable!("rows are non-empty"),
    }
}

/// Speed, heading drift and per-cycle displacement over a window.
pub fn motion_metrics(traj: &Trajectory, w: &WindowSpec) -> Result<MotionMetrics, AnalysisError> {
    let rows = w.rows(traj);
    if rows.is_empty() {
        return Err(AnalysisError::TooShort("window contains no samples"));
    }
    let mean_speed = rows.iter().map(|r| hypot(r.xdot, r.ydot)).sum::<f64>() / rows.len() as f64;
    let first = &rows[0];
    let last = &rows[rows.len() - 1];
    let span = last.t - first.t;

    let cycle = traj.cycle_period().filter(|&c| span + 1e-9 >= c);
    let Some(cycle) = cycle else {
        return Ok(MotionMetrics {
            mean_speed,
            net_heading_drift: last.theta - first.theta,
            cycle_displacement: None,
        });
    };

    let slack = 1e-9 * (1.0 + last.t.abs());
    let head: Vec<TrajectoryRow> = rows
        .iter()
        .take_while(|r| r.t < first.t + cycle - slack)
        .copied()
        .collect();
    let tail_start = rows.partition_point(|r| r.t <= last.t - cycle + slack);
    let tail = &rows[tail_start..];
    let net_heading_drift = if head.is_empty() || tail.is_empty() {
        last.theta - first.theta
    } else {
        mean_theta(tail) - mean_theta(&head)
    };

    let cycles = libm::floor(span / cycle + 1e-9);
    let end = nearest_row(rows, first.t + cycles * cycle);
    let cycle_displacement = Some(hypot(end.x - first.x, end.y - first.y) / cycles);
    Ok(MotionMetrics {
        mean_speed,
        net_heading_drift,
        cycle_displacement,
    })
}
