//! Motion-capture CSV ingestion.
//!
//! Input is a CSV with a header naming at least `t`, `x`, `y` and `theta`
//! (radians, wrapped or not); `theta_t` is optional and other columns are
//! ignored. Rows with a missing, unparsable or non-finite required field are
//! dropped. Angles are unwrapped and rates come from central differences,
//! one-sided at the ends of each contiguous run. Runs are separated by gaps
//! longer than three nominal frame intervals; rates are never taken across a
//! gap.

use std::f64::consts::{PI, TAU};
use std::fs::File;
use std::io::Read;
use std::path::Path;

use modboat_core::{Trajectory, TrajectoryMeta, TrajectoryRow};

use crate::error::FormatError;

/// Gaps longer than this many nominal frame intervals are flagged.
pub const GAP_FACTOR: f64 = 3.0;

const REQUIRED: [&str; 4] = ["t", "x", "y", "theta"];

#[derive(Debug, Clone, PartialEq)]
pub struct Ingested {
    pub trajectory: Trajectory,
    /// Rows discarded for missing or non-finite fields, or a repeated time.
    pub dropped: usize,
    /// `(t_before, t_after)` for every flagged gap.
    pub gaps: Vec<(f64, f64)>,
    /// Median sample interval (s).
    pub nominal_dt: f64,
}

#[derive(Clone, Copy)]
struct Sample {
    t: f64,
    x: f64,
    y: f64,
    theta: f64,
    theta_t: Option<f64>,
}

/// Adds multiples of 2π so successive samples never jump by more than π.
pub fn unwrap_angles(v: &mut [f64]) {
    for i in 1..v.len() {
        let raw = v[i];
        v[i] = raw - TAU * ((raw - v[i - 1] + PI) / TAU).floor();
    }
}

fn median(mut v: Vec<f64>) -> Option<f64> {
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let n = v.len();
    Some(if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    })
}

/// Central differences inside `[lo, hi)`, one-sided at both ends.
fn rates(t: &[f64], v: &[f64], lo: usize, hi: usize, out: &mut [f64]) {
    match hi - lo {
        0 => {}
        1 => out[lo] = 0.0,
        n => {
            out[lo] = (v[lo + 1] - v[lo]) / (t[lo + 1] - t[lo]);
            out[hi - 1] = (v[hi - 1] - v[hi - 2]) / (t[hi - 1] - t[hi - 2]);
            if n > 2 {
                for i in lo + 1..hi - 1 {
                    out[i] = (v[i + 1] - v[i - 1]) / (t[i + 1] - t[i - 1]);
                }
            }
        }
    }
}

pub fn ingest<R: Read>(input: R) -> Result<Ingested, FormatError> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(input);
    let headers = rdr.headers()?.clone();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let mut idx = [0; 4];
    for (slot, name) in idx.iter_mut().zip(REQUIRED) {
        *slot = col(name).ok_or_else(|| FormatError::MissingColumn(name.to_string()))?;
    }
    let theta_t_col = col("theta_t");

    let parse = |rec: &csv::StringRecord, i: usize| -> Option<f64> {
        rec.get(i)
            .and_then(|s| s.parse::<f64>().ok())
            .filter(|v| v.is_finite())
    };
    let mut samples = Vec::new();
    let mut dropped = 0;
    for rec in rdr.records() {
        let rec = rec?;
        let theta_t = match theta_t_col {
            Some(c) => match parse(&rec, c) {
                Some(v) => Some(v),
                None => {
                    dropped += 1;
                    continue;
                }
            },
            None => None,
        };
        match idx.map(|i| parse(&rec, i)) {
            [Some(t), Some(x), Some(y), Some(theta)] => samples.push(Sample {
                t,
                x,
                y,
                theta,
                theta_t,
            }),
            _ => dropped += 1,
        }
    }
    samples.sort_by(|a, b| a.t.total_cmp(&b.t));
    let before = samples.len();
    samples.dedup_by(|b, a| a.t == b.t);
    dropped += before - samples.len();
    if samples.len() < 3 {
        return Err(FormatError::TooFewRows(samples.len()));
    }

    let t: Vec<f64> = samples.iter().map(|s| s.t).collect();
    let nominal_dt =
        median(t.windows(2).map(|w| w[1] - w[0]).collect()).expect("at least two intervals");

    let mut runs = vec![0];
    let mut gaps = Vec::new();
    for i in 1..t.len() {
        if t[i] - t[i - 1] > GAP_FACTOR * nominal_dt {
            runs.push(i);
            gaps.push((t[i - 1], t[i]));
        }
    }
    runs.push(t.len());

    let x: Vec<f64> = samples.iter().map(|s| s.x).collect();
    let y: Vec<f64> = samples.iter().map(|s| s.y).collect();
    let mut theta: Vec<f64> = samples.iter().map(|s| s.theta).collect();
    unwrap_angles(&mut theta);
    let theta_t: Option<Vec<f64>> = theta_t_col.map(|_| {
        let mut v: Vec<f64> = samples.iter().map(|s| s.theta_t.unwrap_or(0.0)).collect();
        unwrap_angles(&mut v);
        v
    });

    let n = t.len();
    let (mut xdot, mut ydot, mut thetadot) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    for w in runs.windows(2) {
        rates(&t, &x, w[0], w[1], &mut xdot);
        rates(&t, &y, w[0], w[1], &mut ydot);
        rates(&t, &theta, w[0], w[1], &mut thetadot);
    }

    let rows = (0..n)
        .map(|i| {
            let tt = theta_t.as_ref().map_or(theta[i], |v| v[i]);
            TrajectoryRow {
                t: t[i],
                x: x[i],
                y: y[i],
                theta: theta[i],
                theta_t: tt,
                phi: tt - theta[i],
                xdot: xdot[i],
                ydot: ydot[i],
                thetadot: thetadot[i],
            }
        })
        .collect();

    let mut meta = TrajectoryMeta::default();
    let notes = &mut meta.notes;
    notes.insert("source".into(), "mocap".into());
    notes.insert("dropped_rows".into(), dropped.to_string());
    notes.insert("gap_count".into(), gaps.len().to_string());
    notes.insert("nominal_dt".into(), nominal_dt.to_string());
    notes.insert("frame_rate".into(), (1.0 / nominal_dt).to_string());
    if !gaps.is_empty() {
        let spans: Vec<String> = gaps.iter().map(|(a, b)| format!("{a}..{b}")).collect();
        notes.insert("gaps".into(), spans.join(";"));
    }

    Ok(Ingested {
        trajectory: Trajectory::new(rows, meta),
        dropped,
        gaps,
        nominal_dt,
    })
}

pub fn ingest_file(path: &Path) -> Result<Ingested, FormatError> {
    let f = File::open(path).map_err(FormatError::file(path))?;
    ingest(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wrap(a: f64) -> f64 {
        (a + PI).rem_euclid(TAU) - PI
    }

    #[test]
    fn unwrap_restores_continuous_rotation() {
        let truth: Vec<f64> = (0..500).map(|i| 0.1 * i as f64).collect();
        let mut v: Vec<f64> = truth.iter().map(|&a| wrap(a)).collect();
        unwrap_angles(&mut v);
        for (a, b) in v.iter().zip(&truth) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn clean_file_passes_through() {
        let mut text = String::from("t,x,y,theta\n");
        for k in 0..3600 {
            let t = k as f64 / 120.0;
            text.push_str(&format!("{t},{},{},0.1\n", 0.1 * t, 0.0));
        }
        let ing = ingest(text.as_bytes()).unwrap();
        assert_eq!(ing.trajectory.len(), 3600);
        assert_eq!(ing.dropped, 0);
        assert!(ing.gaps.is_empty());
        assert!((ing.nominal_dt - 1.0 / 120.0).abs() < 1e-12);
        for r in &ing.trajectory.rows {
            assert!((r.xdot - 0.1).abs() < 1e-9);
            assert_eq!(r.thetadot, 0.0);
        }
    }

    #[test]
    fn nan_and_missing_rows_are_dropped() {
        let mut text = String::from("frame,t,x,y,theta\n");
        for k in 0..100 {
            let t = k as f64 / 120.0;
            match k {
                10 | 20 | 30 => text.push_str(&format!("{k},{t},NaN,0,0\n")),
                40 => text.push_str(&format!("{k},{t},0.1,,0\n")),
                50 => text.push_str(&format!("{k},{t},0.1\n")),
                _ => text.push_str(&format!("{k},{t},0.1,0.2,0.3\n")),
            }
        }
        let ing = ingest(text.as_bytes()).unwrap();
        assert_eq!(ing.trajectory.len(), 95);
        assert_eq!(ing.dropped, 5);
        assert_eq!(ing.trajectory.meta.notes["dropped_rows"], "5");
    }

    #[test]
    fn gaps_are_flagged_and_not_differenced_across() {
        let mut text = String::from("t,x,y,theta\n");
        for k in (0..100).chain(150..200) {
            let t = k as f64 / 100.0;
            text.push_str(&format!("{t},{},0,0\n", t * t));
        }
        let ing = ingest(text.as_bytes()).unwrap();
        assert_eq!(ing.gaps, vec![(0.99, 1.5)]);
        let rows = &ing.trajectory.rows;
        // one-sided at both sides of the gap
        assert!((rows[99].xdot - (0.99f64.powi(2) - 0.98f64.powi(2)) / 0.01).abs() < 1e-9);
        assert!((rows[100].xdot - (1.51f64.powi(2) - 1.5f64.powi(2)) / 0.01).abs() < 1e-9);
        // central inside a run is exact for a quadratic
        assert!((rows[50].xdot - 1.0).abs() < 1e-9);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            ingest("t,x,theta\n0,0,0\n".as_bytes()),
            Err(FormatError::MissingColumn(c)) if c == "y"
        ));
        assert!(matches!(
            ingest("t,x,y,theta\n0,0,0,0\n1,NaN,0,0\n2,0,0,0\n".as_bytes()),
            Err(FormatError::TooFewRows(2))
        ));
    }

    #[test]
    fn theta_t_gives_phi() {
        let text = "t,x,y,theta,theta_t\n0,0,0,0,0.5\n0.1,0,0,0.1,0.2\n0.2,0,0,0.2,-0.1\n";
        let ing = ingest(text.as_bytes()).unwrap();
        for r in &ing.trajectory.rows {
            assert!((r.theta_t - r.theta - r.phi).abs() < 1e-15);
        }
        assert!((ing.trajectory.rows[2].phi + 0.3).abs() < 1e-12);
    }
}
