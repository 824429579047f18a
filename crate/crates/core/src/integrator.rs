//! Fixed-step RK4 integration of the equations of motion.
//!
//! Steps never straddle a stroke boundary (where `phi''` may jump) or an
//! output sample instant. Each interval between consecutive nodes is cut into
//! `ceil(len / dt)` equal steps, so the effective step is at most `dt`.

use alloc::boxed::Box;
use alloc::vec::Vec;

use thiserror::Error;

use crate::model::{
    accel_unchecked, derive_coeffs, Asymmetry, BoatParams, DerivedCoeffs, ModelError, SimState,
};
use crate::trajectory::{Trajectory, TrajectoryMeta, TrajectoryRow};
use crate::waveform::{InputTuple, Segment, WaveformError};

/// Any state component larger than this in magnitude counts as divergence.
pub const DIVERGENCE_LIMIT: f64 = 1e6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("invalid simulation config: {0}")]
    InvalidConfig(&'static str),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Waveform(#[from] WaveformError),
    #[error("integration diverged at t={}", .0.time)]
    Diverged(Box<Divergence>),
}

/// Where and how a run blew up.
#[derive(Debug, Clone, PartialEq)]
pub struct Divergence {
    pub time: f64,
    /// First state outside the divergence limit.
    pub state: SimState,
    /// Last output row written before the failure.
    pub last_row: Option<TrajectoryRow>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    /// Maximum integration step (s).
    pub dt: f64,
    /// Simulated time span (s).
    pub duration: f64,
    /// Output rows per second.
    pub sample_rate: f64,
    pub initial: SimState,
    /// When false, `phi` is written as zero and `theta_t` equals `theta`.
    pub record_inputs: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            dt: 1e-3,
            duration: 30.0,
            sample_rate: 120.0,
            initial: SimState::REST,
            record_inputs: true,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        if !(self.dt.is_finite() && self.dt > 0.0 && self.dt <= 0.01) {
            return Err(SimError::InvalidConfig("dt must satisfy 0 < dt <= 0.01"));
        }
        if !(self.duration.is_finite() && self.duration > 0.0) {
            return Err(SimError::InvalidConfig("duration must be > 0"));
        }
        if !(self.sample_rate.is_finite() && self.sample_rate > 0.0) {
            return Err(SimError::InvalidConfig("sample_rate must be > 0"));
        }
        if self.dt > 1.0 / self.sample_rate {
            return Err(SimError::InvalidConfig("dt must not exceed 1/sample_rate"));
        }
        if !self.initial.is_finite() {
            return Err(SimError::InvalidConfig("initial state must be finite"));
        }
        Ok(())
    }
}

/// Everything the right-hand side needs, validated once.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dynamics {
    pub params: BoatParams,
    pub coeffs: DerivedCoeffs,
    pub asymmetry: Asymmetry,
    pub input: InputTuple,
}

impl Dynamics {
    pub fn new(
        params: BoatParams,
        asymmetry: Asymmetry,
        input: InputTuple,
    ) -> Result<Self, ModelError> {
        let coeffs = derive_coeffs(&params)?;
        Ok(Dynamics {
            params,
            coeffs,
            asymmetry,
            input,
        })
    }

    /// State derivative with `phi''` taken from `segment`'s formula.
    #[inline]
    pub fn derivative(&self, t: f64, s: &SimState, segment: &Segment) -> [f64; 6] {
        let phi_ddot = segment.phi_ddot(&self.input, t);
        let a = accel_unchecked(s, phi_ddot, &self.params, &self.coeffs, self.asymmetry);
        [s.xdot, s.ydot, s.thetadot, a.xddot, a.yddot, a.thetaddot]
    }
}

fn axpy(s: &[f64; 6], k: &[f64; 6], h: f64) -> SimState {
    let mut out = *s;
    for (o, d) in out.iter_mut().zip(k) {
        *o += h * d;
    }
    SimState::from_array(out)
}

fn check(state: SimState, time: f64) -> Result<SimState, SimError> {
    let ok = state
        .to_array()
        .iter()
        .all(|v| v.is_finite() && v.abs() <= DIVERGENCE_LIMIT);
    if ok {
        Ok(state)
    } else {
        Err(SimError::Diverged(Box::new(Divergence {
            time,
            state,
            last_row: None,
        })))
    }
}

/// One classical RK4 step from `t` to `t + h`.
///
/// `[t, t + h]` must lie inside a single stroke; the stroke is located from
/// the step midpoint so a step that ends exactly on a boundary still uses the
/// left piece.
pub fn rk4_step(s: &SimState, t: f64, h: f64, dynamics: &Dynamics) -> Result<SimState, SimError> {
    if !(h.is_finite() && h > 0.0) {
        return Err(SimError::InvalidConfig("step must be > 0"));
    }
    let segment = dynamics.input.segment_at(t + 0.5 * h);
    check(rk4_in_segment(s, t, h, dynamics, &segment), t + h)
}

#[inline]
fn rk4_in_segment(
    s: &SimState,
    t: f64,
    h: f64,
    dynamics: &Dynamics,
    segment: &Segment,
) -> SimState {
    let y = s.to_array();
    let half = 0.5 * h;
    let k1 = dynamics.derivative(t, s, segment);
    let k2 = dynamics.derivative(t + half, &axpy(&y, &k1, half), segment);
    let k3 = dynamics.derivative(t + half, &axpy(&y, &k2, half), segment);
    let k4 = dynamics.derivative(t + h, &axpy(&y, &k3, h), segment);
    let mut out = y;
    for i in 0..6 {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    SimState::from_array(out)
}

/// Integrates over `[a, b]` (one stroke) in equal steps no longer than `dt`.
fn advance(
    mut state: SimState,
    a: f64,
    b: f64,
    dt: f64,
    dynamics: &Dynamics,
) -> Result<SimState, SimError> {
    let span = b - a;
    if span <= 0.0 {
        return Ok(state);
    }
    let steps = libm::ceil(span / dt - 1e-9).max(1.0) as usize;
    let h = span / steps as f64;
    let segment = dynamics.input.segment_at(a + 0.5 * span);
    for i in 0..steps {
        let t = a + i as f64 * h;
        state = check(rk4_in_segment(&state, t, h, dynamics, &segment), t + h)?;
    }
    Ok(state)
}

fn row(t: f64, s: &SimState, input: &InputTuple, record_inputs: bool) -> TrajectoryRow {
    let phi = if record_inputs { input.phi(t) } else { 0.0 };
    TrajectoryRow {
        t,
        x: s.x,
        y: s.y,
        theta: s.theta,
        theta_t: crate::model::top_orientation(s.theta, phi),
        phi,
        xdot: s.xdot,
        ydot: s.ydot,
        thetadot: s.thetadot,
    }
}

/// Runs the boat from `c.initial` under input `u` and samples it at
/// `c.sample_rate`. Output is bit-for-bit reproducible.
pub fn simulate(
    p: &BoatParams,
    eps: Asymmetry,
    u: &InputTuple,
    c: &SimConfig,
) -> Result<Trajectory, SimError> {
    c.validate()?;
    let dynamics = Dynamics::new(*p, eps, *u)?;
    let samples = libm::floor(c.duration * c.sample_rate + 1e-9) as usize;
    let sample_time = |k: usize| k as f64 / c.sample_rate;
    let end = sample_time(samples);
    let boundaries: Vec<f64> = if end > 0.0 {
        u.piece_boundaries(end)?
    } else {
        Vec::new()
    };

    let mut rows = Vec::with_capacity(samples + 1);
    let mut state = c.initial;
    rows.push(row(0.0, &state, u, c.record_inputs));
    let mut next_boundary = boundaries.partition_point(|&b| b <= 0.0);

    for k in 1..=samples {
        let t_prev = sample_time(k - 1);
        let t_next = sample_time(k);
        let tol = 1e-9 * (1.0 + t_next);
        let mut a = t_prev;
        while next_boundary < boundaries.len() && boundaries[next_boundary] < t_next - tol {
            let b = boundaries[next_boundary];
            next_boundary += 1;
            if b <= a + tol {
                continue;
            }
            state = advance(state, a, b, c.dt, &dynamics).map_err(|e| with_last(e, &rows))?;
            a = b;
        }
        while next_boundary < boundaries.len() && boundaries[next_boundary] <= t_next + tol {
            next_boundary += 1;
        }
        state = advance(state, a, t_next, c.dt, &dynamics).map_err(|e| with_last(e, &rows))?;
        rows.push(row(t_next, &state, u, c.record_inputs));
    }

    let meta = TrajectoryMeta {
        params_digest: Some(p.digest()),
        input: Some(*u),
        config: Some(*c),
        epsilon: Some(eps.value()),
        ..TrajectoryMeta::default()
    };
    Ok(Trajectory::new(rows, meta))
}

fn with_last(err: SimError, rows: &[TrajectoryRow]) -> SimError {
    match err {
        SimError::Diverged(mut d) => {
            d.last_row = rows.last().copied();
            SimError::Diverged(d)
        }
        other => other,
    }
}

/// `I theta' + I_t phi'`, conserved when every fluid term is off.
pub fn angular_momentum(s: &SimState, phidot: f64, p: &BoatParams) -> f64 {
    p.inertia * s.thetadot + p.drive_inertia * phidot
}
