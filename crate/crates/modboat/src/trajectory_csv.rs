//! Trajectory CSV: `# key=value` metadata lines, the column header, then one
//! row per sample written with 17 significant digits so every value reads
//! back bit-exactly.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use modboat_core::{InputTuple, SimConfig, SimState, Trajectory, TrajectoryMeta, TrajectoryRow};

use crate::error::FormatError;

pub const FORMAT_TAG: &str = "modboat-trajectory";

pub fn header() -> String {
    TrajectoryRow::COLUMNS.join(",")
}

pub fn write_trajectory<W: Write>(traj: &Trajectory, mut w: W) -> Result<(), FormatError> {
    if traj.is_empty() {
        return Err(FormatError::Empty("trajectory"));
    }
    writeln!(w, "# format={FORMAT_TAG}")?;
    write_meta(&traj.meta, &mut w)?;
    writeln!(w, "{}", header())?;
    let mut line = String::new();
    for r in &traj.rows {
        line.clear();
        for (i, v) in r.to_array().iter().enumerate() {
            if i > 0 {
                line.push(',');
            }
            line.push_str(&format!("{v:.16e}"));
        }
        writeln!(w, "{line}")?;
    }
    w.flush()?;
    Ok(())
}

fn write_meta<W: Write>(m: &TrajectoryMeta, w: &mut W) -> Result<(), FormatError> {
    if let Some(d) = m.params_digest {
        writeln!(w, "# params_digest={d:016x}")?;
    }
    if let Some(u) = m.input {
        writeln!(w, "# input={u}")?;
    }
    if let Some(e) = m.epsilon {
        writeln!(w, "# epsilon={e}")?;
    }
    if let Some(c) = m.config {
        writeln!(w, "# dt={}", c.dt)?;
        writeln!(w, "# duration={}", c.duration)?;
        writeln!(w, "# sample_rate={}", c.sample_rate)?;
        writeln!(w, "# record_inputs={}", c.record_inputs)?;
        let s = c.initial.to_array().map(|v| v.to_string()).join(",");
        writeln!(w, "# initial={s}")?;
    }
    for (k, v) in &m.notes {
        writeln!(w, "# note.{k}={v}")?;
    }
    Ok(())
}

#[derive(Default)]
struct ConfigParts {
    dt: Option<f64>,
    duration: Option<f64>,
    sample_rate: Option<f64>,
    record_inputs: Option<bool>,
    initial: Option<SimState>,
}

fn num(line: usize, key: &str, v: &str) -> Result<f64, FormatError> {
    v.parse()
        .map_err(|_| FormatError::syntax(line, format!("bad value for `{key}`: `{v}`")))
}

fn read_meta_line(
    line: usize,
    body: &str,
    meta: &mut TrajectoryMeta,
    cfg: &mut ConfigParts,
) -> Result<(), FormatError> {
    let Some((key, value)) = body.split_once('=') else {
        // free comment
        return Ok(());
    };
    let (key, value) = (key.trim(), value.trim());
    match key {
        "format" if value == FORMAT_TAG => {}
        "format" => {
            return Err(FormatError::syntax(
                line,
                format!("not a trajectory file (format={value})"),
            ))
        }
        "params_digest" => {
            let d = u64::from_str_radix(value, 16)
                .map_err(|_| FormatError::syntax(line, "bad params_digest"))?;
            meta.params_digest = Some(d);
        }
        "input" => {
            let u: InputTuple = value
                .parse()
                .map_err(|e| FormatError::syntax(line, format!("{e}")))?;
            meta.input = Some(u);
        }
        "epsilon" => meta.epsilon = Some(num(line, key, value)?),
        "dt" => cfg.dt = Some(num(line, key, value)?),
        "duration" => cfg.duration = Some(num(line, key, value)?),
        "sample_rate" => cfg.sample_rate = Some(num(line, key, value)?),
        "record_inputs" => {
            let b = value
                .parse()
                .map_err(|_| FormatError::syntax(line, "record_inputs must be true or false"))?;
            cfg.record_inputs = Some(b);
        }
        "initial" => {
            let parts: Vec<&str> = value.split(',').collect();
            if parts.len() != 6 {
                return Err(FormatError::syntax(line, "initial needs 6 values"));
            }
            let mut a = [0.0; 6];
            for (slot, p) in a.iter_mut().zip(parts) {
                *slot = num(line, key, p.trim())?;
            }
            cfg.initial = Some(SimState::from_array(a));
        }
        k => match k.strip_prefix("note.") {
            Some(note) => {
                meta.notes.insert(note.to_string(), value.to_string());
            }
            None => {
                return Err(FormatError::UnknownKey {
                    line,
                    key: k.to_string(),
                })
            }
        },
    }
    Ok(())
}

fn check_header(found: &str) -> Result<(), FormatError> {
    let cols: Vec<&str> = found.split(',').map(str::trim).collect();
    let expected = TrajectoryRow::COLUMNS;
    if cols.len() > expected.len() && cols[..expected.len()] == expected {
        return Err(FormatError::ExtraColumn(cols[expected.len()].to_string()));
    }
    if cols != expected {
        return Err(FormatError::Header {
            expected: header(),
            found: found.to_string(),
        });
    }
    Ok(())
}

pub fn read_trajectory<R: BufRead>(r: R) -> Result<Trajectory, FormatError> {
    let mut meta = TrajectoryMeta::default();
    let mut cfg = ConfigParts::default();
    let mut rows = Vec::new();
    let mut have_header = false;
    let ncols = TrajectoryRow::COLUMNS.len();

    for (i, text) in r.lines().enumerate() {
        let text = text?;
        let line = i + 1;
        let s = text.trim();
        if s.is_empty() {
            continue;
        }
        if !have_header {
            if let Some(body) = s.strip_prefix('#') {
                read_meta_line(line, body.trim(), &mut meta, &mut cfg)?;
            } else {
                check_header(s)?;
                have_header = true;
            }
            continue;
        }
        let fields: Vec<&str> = s.split(',').collect();
        if fields.len() != ncols {
            return Err(FormatError::ColumnCount {
                line,
                expected: ncols,
                found: fields.len(),
            });
        }
        let mut a = [0.0; 9];
        for (slot, (f, name)) in a.iter_mut().zip(fields.iter().zip(TrajectoryRow::COLUMNS)) {
            *slot = num(line, name, f.trim())?;
        }
        rows.push(TrajectoryRow::from_array(a));
    }
    if !have_header {
        return Err(FormatError::Header {
            expected: header(),
            found: String::new(),
        });
    }

    if let (Some(dt), Some(duration), Some(sample_rate)) = (cfg.dt, cfg.duration, cfg.sample_rate) {
        meta.config = Some(SimConfig {
            dt,
            duration,
            sample_rate,
            initial: cfg.initial.unwrap_or(SimState::REST),
            record_inputs: cfg.record_inputs.unwrap_or(true),
        });
    }
    Ok(Trajectory::new(rows, meta))
}

pub fn save(traj: &Trajectory, path: &Path) -> Result<(), FormatError> {
    let f = File::create(path).map_err(FormatError::file(path))?;
    write_trajectory(traj, BufWriter::new(f))
}

pub fn load(path: &Path) -> Result<Trajectory, FormatError> {
    let f = File::open(path).map_err(FormatError::file(path))?;
    read_trajectory(BufReader::new(f))
}

/// True when the text starts like a trajectory file written by this crate.
pub fn looks_like_trajectory(text: &str) -> bool {
    text.lines()
        .map(str::trim)
        .find(|l| !l.is_empty())
        .is_some_and(|l| l == format!("# format={FORMAT_TAG}") || l == header())
}

#[cfg(test)]
mod tests {
    use super::*;
    use modboat_core::{default_params, simulate, Asymmetry};

    fn sample() -> Trajectory {
        let u = InputTuple::new(1.1, 0.9, 2.0, 0.1).unwrap();
        let c = SimConfig {
            duration: 3.0,
            ..SimConfig::default()
        };
        let mut t = simulate(&default_params(), Asymmetry::new(0.03).unwrap(), &u, &c).unwrap();
        t.meta.notes.insert("source".into(), "unit test".into());
        t
    }

    fn to_text(t: &Trajectory) -> String {
        let mut buf = Vec::new();
        write_trajectory(t, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let t = sample();
        let back = read_trajectory(to_text(&t).as_bytes()).unwrap();
        assert_eq!(back, t);
        assert!(looks_like_trajectory(&to_text(&t)));
    }

    #[test]
    fn empty_trajectory_is_not_written() {
        let mut buf = Vec::new();
        let err = write_trajectory(&Trajectory::default(), &mut buf).unwrap_err();
        assert!(matches!(err, FormatError::Empty(_)));
    }

    #[test]
    fn extra_column_is_named() {
        let text = to_text(&sample()).replacen(&header(), &format!("{},speed", header()), 1);
        let err = read_trajectory(text.as_bytes()).unwrap_err();
        assert!(matches!(&err, FormatError::ExtraColumn(c) if c == "speed"));
        assert!(err.to_string().contains("speed"));
    }

    #[test]
    fn malformed_header_and_ragged_rows() {
        let text = to_text(&sample()).replacen("theta_t", "thetaT", 1);
        assert!(matches!(
            read_trajectory(text.as_bytes()),
            Err(FormatError::Header { .. })
        ));

        let mut text = to_text(&sample());
        text.push_str("1.0,2.0\n");
        assert!(matches!(
            read_trajectory(text.as_bytes()),
            Err(FormatError::ColumnCount {
                expected: 9,
                found: 2,
                ..
            })
        ));
    }

    #[test]
    fn unknown_metadata_key_is_rejected() {
        let text = format!("# colour=blue\n{}\n", header());
        assert!(matches!(
            read_trajectory(text.as_bytes()),
            Err(FormatError::UnknownKey { line: 1, .. })
        ));
    }
}
