//! Time-sampled trajectories, either simulated or ingested from motion capture.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::integrator::SimConfig;
use crate::waveform::InputTuple;

/// One output sample. `theta_t = theta + phi` holds on every row.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TrajectoryRow {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub theta: f64,
    pub theta_t: f64,
    pub phi: f64,
    pub xdot: f64,
    pub ydot: f64,
    pub thetadot: f64,
}

impl TrajectoryRow {
    pub const COLUMNS: [&'static str; 9] = [
        "t", "x", "y", "theta", "theta_t", "phi", "xdot", "ydot", "thetadot",
    ];

    pub fn to_array(&self) -> [f64; 9] {
        [
            self.t,
            self.x,
            self.y,
            self.theta,
            self.theta_t,
            self.phi,
            self.xdot,
            self.ydot,
            self.thetadot,
        ]
    }

    pub fn from_array(a: [f64; 9]) -> Self {
        TrajectoryRow {
            t: a[0],
            x: a[1],
            y: a[2],
            theta: a[3],
            theta_t: a[4],
            phi: a[5],
            xdot: a[6],
            ydot: a[7],
            thetadot: a[8],
        }
    }

    pub fn position(&self) -> [f64; 2] {
        [self.x, self.y]
    }
}

/// Provenance carried alongside the samples.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrajectoryMeta {
    pub params_digest: Option<u64>,
    pub input: Option<InputTuple>,
    pub config: Option<SimConfig>,
    pub epsilon: Option<f64>,
    /// Free-form annotations, e.g. `source`, `dropped_rows`, `gaps`.
    pub notes: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trajectory {
    pub rows: Vec<TrajectoryRow>,
    pub meta: TrajectoryMeta,
}

impl Trajectory {
    pub fn new(rows: Vec<TrajectoryRow>, meta: TrajectoryMeta) -> Self {
        Trajectory { rows, meta }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn start_time(&self) -> Option<f64> {
        self.rows.first().map(|r| r.t)
    }

    pub fn end_time(&self) -> Option<f64> {
        self.rows.last().map(|r| r.t)
    }

    /// Input cycle period, when the trajectory was produced by a known input.
    pub fn cycle_period(&self) -> Option<f64> {
        self.meta.input.map(|u| u.period())
    }

    /// Rows with `t_start <= t <= t_end`, allowing a few ulps of slack at
    /// both ends so nominal sample times are not lost to rounding.
    pub fn window(&self, t_start: f64, t_end: f64) -> &[TrajectoryRow] {
        let slack = 1e-9 * (1.0 + t_end.abs());
        let lo = self.rows.partition_point(|r| r.t < t_start - slack);
        let hi = self.rows.partition_point(|r| r.t <= t_end + slack);
        &self.rows[lo..hi.max(lo)]
    }

    pub fn positions(&self) -> Vec<[f64; 2]> {
        self.rows.iter().map(TrajectoryRow::position).collect()
    }

    /// Copy reflected through the y axis: `x`, `theta` and their rates negate,
    /// and so do `phi` and `theta_t`.
    pub fn mirrored(&self) -> Self {
        let rows = self
            .rows
            .iter()
            .map(|r| TrajectoryRow {
                t: r.t,
                x: -r.x,
                y: r.y,
                theta: -r.theta,
                theta_t: -r.theta_t,
                phi: -r.phi,
                xdot: -r.xdot,
                ydot: r.ydot,
                thetadot: -r.thetadot,
            })
            .collect();
        Trajectory {
            rows,
            meta: self.meta.clone(),
        }
    }
}
