//! Prescribed motor trajectory.
//!
//! One cycle of length `P = (T1 + T2) / 2` consists of two strokes:
//!
//! ```text
//! phi(t) = phi0 + A cos(w1 tau)              tau in [0, T1/2)
//! phi(t) = phi0 - A cos(w2 (tau - T1/2))     tau in [T1/2, P)
//! ```
//!
//! with `tau = t mod P` and `w_i = 2 pi / T_i`. The boundary instant
//! belongs to the piece that starts there.

use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
use core::str::FromStr;

use libm::{cos, floor, sin};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WaveformError {
    #[error("stroke periods must be finite and > 0, got T1={t1}, T2={t2}")]
    InvalidPeriod { t1: f64, t2: f64 },
    #[error("amplitude and midpoint must be finite")]
    NonFinite,
    #[error("duration must be finite and > 0, got {0}")]
    InvalidDuration(f64),
    #[error("expected `T1,T2,A,phi0`, got `{0}`")]
    Syntax(alloc::string::String),
}

/// `(T1, T2, A, phi0)`: stroke periods (s), amplitude (rad) and midpoint (rad).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InputTuple {
    t1: f64,
    t2: f64,
    amplitude: f64,
    midpoint: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stroke {
    First,
    Second,
}

/// One stroke instance located in absolute time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub stroke: Stroke,
    /// Absolute start time of the stroke (s).
    pub start: f64,
}

impl InputTuple {
    pub fn new(t1: f64, t2: f64, amplitude: f64, midpoint: f64) -> Result<Self, WaveformError> {
        if !(t1.is_finite() && t2.is_finite() && t1 > 0.0 && t2 > 0.0) {
            return Err(WaveformError::InvalidPeriod { t1, t2 });
        }
        if !(amplitude.is_finite() && midpoint.is_finite()) {
            return Err(WaveformError::NonFinite);
        }
        Ok(InputTuple {
            t1,
            t2,
            amplitude,
            midpoint,
        })
    }

    /// Stroke periods chosen so that `T1 / T2 = ratio` and the cycle
    /// period stays `period`.
    pub fn with_ratio(
        ratio: f64,
        period: f64,
        amplitude: f64,
        midpoint: f64,
    ) -> Result<Self, WaveformError> {
        let t1 = 2.0 * period * ratio / (1.0 + ratio);
        let t2 = 2.0 * period / (1.0 + ratio);
        InputTuple::new(t1, t2, amplitude, midpoint)
    }

    pub fn t1(&self) -> f64 {
        self.t1
    }

    pub fn t2(&self) -> f64 {
        self.t2
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn midpoint(&self) -> f64 {
        self.midpoint
    }

    pub fn with_midpoint(mut self, midpoint: f64) -> Self {
        self.midpoint = midpoint;
        self
    }

    /// Phase-inverted copy: `A -> -A`, `phi0 -> -phi0`.
    pub fn mirrored(self) -> Self {
        InputTuple {
            amplitude: -self.amplitude,
            midpoint: -self.midpoint,
            ..self
        }
    }

    pub fn omega1(&self) -> f64 {
        2.0 * PI / self.t1
    }

    pub fn omega2(&self) -> f64 {
        2.0 * PI / self.t2
    }

    /// Cycle period, two strokes.
    pub fn period(&self) -> f64 {
        0.5 * (self.t1 + self.t2)
    }

    pub fn segment_at(&self, t: f64) -> Segment {
        let period = self.period();
        let mut cycle = floor(t / period);
        let mut tau = t - cycle * period;
        if tau >= period {
            cycle += 1.0;
            tau -= period;
        } else if tau < 0.0 {
            cycle -= 1.0;
            tau += period;
        }
        let cycle_start = cycle * period;
        if tau < 0.5 * self.t1 {
            Segment {
                stroke: Stroke::First,
                start: cycle_start,
            }
        } else {
            Segment {
                stroke: Stroke::Second,
                start: cycle_start + 0.5 * self.t1,
            }
        }
    }

    pub fn phi(&self, t: f64) -> f64 {
        self.segment_at(t).phi(self, t)
    }

    pub fn phi_dot(&self, t: f64) -> f64 {
        self.segment_at(t).phi_dot(self, t)
    }

    pub fn phi_ddot(&self, t: f64) -> f64 {
        self.segment_at(t).phi_ddot(self, t)
    }

    /// Every stroke start `kP` and `kP + T1/2` inside `[0, duration]`.
    pub fn piece_boundaries(&self, duration: f64) -> Result<Vec<f64>, WaveformError> {
        if !(duration.is_finite() && duration > 0.0) {
            return Err(WaveformError::InvalidDuration(duration));
        }
        let period = self.period();
        let limit = duration * (1.0 + 1e-12);
        let mut out = Vec::new();
        let mut k = 0.0;
        loop {
            let start = k * period;
            if start > limit {
                break;
            }
            out.push(start);
            let half = start + 0.5 * self.t1;
            if half <= limit {
                out.push(half);
            }
            k += 1.0;
        }
        Ok(out)
    }
}

impl Segment {
    fn local(&self, u: &InputTuple, t: f64) -> (f64, f64, f64) {
        let s = t - self.start;
        match self.stroke {
            Stroke::First => (u.amplitude, u.omega1(), s),
            Stroke::Second => (-u.amplitude, u.omega2(), s),
        }
    }

    /// Piece formula evaluated at `t`, also valid slightly outside the piece.
    pub fn phi(&self, u: &InputTuple, t: f64) -> f64 {
        let (a, w, s) = self.local(u, t);
        u.midpoint + a * cos(w * s)
    }

    pub fn phi_dot(&self, u: &InputTuple, t: f64) -> f64 {
        let (a, w, s) = self.local(u, t);
        -a * w * sin(w * s)
    }

    pub fn phi_ddot(&self, u: &InputTuple, t: f64) -> f64 {
        let (a, w, s) = self.local(u, t);
        -a * w * w * cos(w * s)
    }
}

impl fmt::Display for InputTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{},{},{}",
            self.t1, self.t2, self.amplitude, self.midpoint
        )
    }
}

/// Parses `T1,T2,A,phi0` with angles in radians.
impl FromStr for InputTuple {
    type Err = WaveformError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let syntax = || WaveformError::Syntax(s.into());
        let mut values = [0.0; 4];
        let mut parts = s.split(',');
        for slot in values.iter_mut() {
            *slot = parts
                .next()
                .and_then(|p| p.trim().parse().ok())
                .ok_or_else(syntax)?;
        }
        if parts.next().is_some() {
            return Err(syntax());
        }
        InputTuple::new(values[0], values[1], values[2], values[3])
    }
}
