//! Report and sweep CSV files.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use modboat_core::{CurvatureReport, InputTuple, MotionMetrics, SweepKind, SweepRow, SweepTable};

use crate::error::FormatError;

pub const REPORT_COLUMNS: [&str; 9] = [
    "label",
    "signed_radius",
    "truncated",
    "rms_residual",
    "mean_speed",
    "net_heading_drift",
    "n_points",
    "t_start",
    "t_end",
];

pub const SWEEP_FORMAT_TAG: &str = "modboat-sweep";

pub const SWEEP_COLUMNS: [&str; 11] = [
    "value",
    "signed_radius",
    "truncated",
    "fitted_radius",
    "rms_residual",
    "mean_speed",
    "net_heading_drift",
    "cycle_displacement",
    "n_points",
    "t_start",
    "t_end",
];

/// Shortest text that reads back to the same value; exponent form for very
/// small or large magnitudes.
pub fn num(v: f64) -> String {
    format!("{v:?}")
}

/// One labelled measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub label: String,
    pub report: CurvatureReport,
    pub metrics: MotionMetrics,
}

impl ReportRow {
    fn record(&self) -> [String; 9] {
        let r = &self.report;
        [
            self.label.clone(),
            num(r.signed_radius),
            r.truncated.to_string(),
            num(r.rms_residual),
            num(self.metrics.mean_speed),
            num(self.metrics.net_heading_drift),
            r.n_points.to_string(),
            num(r.t_start),
            num(r.t_end),
        ]
    }
}

pub fn write_reports<W: Write>(rows: &[ReportRow], w: W) -> Result<(), FormatError> {
    if rows.is_empty() {
        return Err(FormatError::Empty("report"));
    }
    let mut out = csv::Writer::from_writer(w);
    out.write_record(REPORT_COLUMNS)?;
    for row in rows {
        out.write_record(row.record())?;
    }
    out.flush()?;
    Ok(())
}

/// The report as one CSV line without header, as printed by the CLI.
pub fn report_line(row: &ReportRow) -> String {
    row.record().join(",")
}

pub fn save_reports(rows: &[ReportRow], path: &Path) -> Result<(), FormatError> {
    let f = File::create(path).map_err(FormatError::file(path))?;
    write_reports(rows, BufWriter::new(f))
}

fn sweep_record(row: &SweepRow) -> [String; 11] {
    let r = &row.report;
    let m = &row.metrics;
    [
        num(row.swept_value),
        num(r.signed_radius),
        r.truncated.to_string(),
        num(r.fitted_radius),
        num(r.rms_residual),
        num(m.mean_speed),
        num(m.net_heading_drift),
        m.cycle_displacement.map(num).unwrap_or_default(),
        r.n_points.to_string(),
        num(r.t_start),
        num(r.t_end),
    ]
}

pub fn write_sweep<W: Write>(table: &SweepTable, mut w: W) -> Result<(), FormatError> {
    if table.rows.is_empty() {
        return Err(FormatError::Empty("sweep table"));
    }
    writeln!(w, "# format={SWEEP_FORMAT_TAG}")?;
    writeln!(w, "# kind={}", table.kind)?;
    writeln!(w, "# base={}", table.base)?;
    writeln!(w, "# params_digest={:016x}", table.params_digest)?;
    writeln!(w, "# hull_diameter={}", table.hull_diameter)?;
    writeln!(w, "# truncation={}", table.truncation)?;
    let mut out = csv::Writer::from_writer(w);
    out.write_record(SWEEP_COLUMNS)?;
    for row in &table.rows {
        out.write_record(sweep_record(row))?;
    }
    out.flush()?;
    Ok(())
}

pub fn save_sweep(table: &SweepTable, path: &Path) -> Result<(), FormatError> {
    let f = File::create(path).map_err(FormatError::file(path))?;
    write_sweep(table, BufWriter::new(f))
}

fn field<T: std::str::FromStr>(line: usize, name: &str, s: &str) -> Result<T, FormatError> {
    s.trim()
        .parse()
        .map_err(|_| FormatError::syntax(line, format!("bad `{name}` value `{s}`")))
}

pub fn read_sweep(text: &str) -> Result<SweepTable, FormatError> {
    let mut kind = None;
    let mut base = None;
    let mut digest = None;
    let mut hull = None;
    let mut truncation = None;
    let mut body_start = 0;
    let mut meta_lines = 0;
    for raw in text.split_inclusive('\n') {
        let s = raw.trim();
        let Some(comment) = s.strip_prefix('#') else {
            if !s.is_empty() {
                break;
            }
            body_start += raw.len();
            meta_lines += 1;
            continue;
        };
        body_start += raw.len();
        meta_lines += 1;
        let Some((k, v)) = comment.split_once('=') else {
            continue;
        };
        let (k, v) = (k.trim(), v.trim());
        let line = meta_lines;
        match k {
            "format" if v == SWEEP_FORMAT_TAG => {}
            "format" => {
                return Err(FormatError::syntax(
                    line,
                    format!("not a sweep file (format={v})"),
                ))
            }
            "kind" => {
                let parsed: SweepKind = v.parse().map_err(|e: modboat_core::ExperimentError| {
                    FormatError::syntax(line, e.to_string())
                })?;
                kind = Some(parsed);
            }
            "base" => {
                let parsed: InputTuple = v.parse().map_err(|e: modboat_core::WaveformError| {
                    FormatError::syntax(line, e.to_string())
                })?;
                base = Some(parsed);
            }
            "params_digest" => {
                digest = Some(
                    u64::from_str_radix(v, 16)
                        .map_err(|_| FormatError::syntax(line, "bad params_digest"))?,
                )
            }
            "hull_diameter" => hull = Some(field::<f64>(line, k, v)?),
            "truncation" => truncation = Some(field::<f64>(line, k, v)?),
            other => {
                return Err(FormatError::UnknownKey {
                    line,
                    key: other.to_string(),
                })
            }
        }
    }
    let missing = |k: &str| FormatError::Invalid(format!("sweep file lacks `{k}` metadata"));
    let kind = kind.ok_or_else(|| missing("kind"))?;
    let base = base.ok_or_else(|| missing("base"))?;
    let params_digest = digest.ok_or_else(|| missing("params_digest"))?;
    let hull_diameter = hull.ok_or_else(|| missing("hull_diameter"))?;
    let truncation = truncation.ok_or_else(|| missing("truncation"))?;

    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(&text.as_bytes()[body_start..]);
    let headers = rdr.headers()?.clone();
    let cols: Vec<&str> = headers.iter().collect();
    if cols.len() > SWEEP_COLUMNS.len() && cols[..SWEEP_COLUMNS.len()] == SWEEP_COLUMNS {
        return Err(FormatError::ExtraColumn(
            cols[SWEEP_COLUMNS.len()].to_string(),
        ));
    }
    if cols != SWEEP_COLUMNS {
        return Err(FormatError::Header {
            expected: SWEEP_COLUMNS.join(","),
            found: cols.join(","),
        });
    }
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = meta_lines + i + 2;
        if rec.len() != SWEEP_COLUMNS.len() {
            return Err(FormatError::ColumnCount {
                line,
                expected: SWEEP_COLUMNS.len(),
                found: rec.len(),
            });
        }
        let f = |k: usize| &rec[k];
        let cycle = f(7).trim();
        rows.push(SweepRow {
            swept_value: field(line, SWEEP_COLUMNS[0], f(0))?,
            report: CurvatureReport {
                signed_radius: field(line, SWEEP_COLUMNS[1], f(1))?,
                truncated: field(line, SWEEP_COLUMNS[2], f(2))?,
                fitted_radius: field(line, SWEEP_COLUMNS[3], f(3))?,
                rms_residual: field(line, SWEEP_COLUMNS[4], f(4))?,
                n_points: field(line, SWEEP_COLUMNS[8], f(8))?,
                t_start: field(line, SWEEP_COLUMNS[9], f(9))?,
                t_end: field(line, SWEEP_COLUMNS[10], f(10))?,
                truncation,
                hull_diameter,
            },
            metrics: MotionMetrics {
                mean_speed: field(line, SWEEP_COLUMNS[5], f(5))?,
                net_heading_drift: field(line, SWEEP_COLUMNS[6], f(6))?,
                cycle_displacement: if cycle.is_empty() {
                    None
                } else {
                    Some(field(line, SWEEP_COLUMNS[7], cycle)?)
                },
            },
        });
    }
    if rows.is_empty() {
        return Err(FormatError::Empty("sweep table"));
    }
    Ok(SweepTable {
        kind,
        base,
        params_digest,
        hull_diameter,
        truncation,
        rows,
    })
}

pub fn load_sweep(path: &Path) -> Result<SweepTable, FormatError> {
    let text = fs::read_to_string(path).map_err(FormatError::file(path))?;
    read_sweep(&text)
}

pub fn looks_like_sweep(text: &str) -> bool {
    text.lines()
        .map(str::trim)
        .find(|l| !l.is_empty())
        .is_some_and(|l| l == format!("# format={SWEEP_FORMAT_TAG}"))
}
