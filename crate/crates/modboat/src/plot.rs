//! Self-contained SVG plots of trajectories and sweep tables.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use modboat_core::{SweepKind, SweepTable, Trajectory};

use crate::error::FormatError;

/// Default spacing of the orientation arrows (s).
pub const ARROW_EVERY: f64 = 0.5;

const MARGIN: f64 = 50.0;
const PLOT_SIZE: f64 = 560.0;

fn open_svg(s: &mut String, w: f64, h: f64) {
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.0} {h:.0}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
}

/// Maps world coordinates to pixels with equal scale on both axes.
struct Frame {
    x0: f64,
    y1: f64,
    scale: f64,
}

impl Frame {
    fn px(&self, x: f64, y: f64) -> (f64, f64) {
        (
            MARGIN + (x - self.x0) * self.scale,
            MARGIN + (self.y1 - y) * self.scale,
        )
    }
}

/// Centre-of-mass path with a green start circle, a red end cross and
/// arrows along the top-body heading `theta_t` every `arrow_every` seconds.
/// Zero heading points along +y.
pub fn trajectory_svg(traj: &Trajectory, arrow_every: f64) -> Result<String, FormatError> {
    let rows = &traj.rows;
    if rows.is_empty() {
        return Err(FormatError::Empty("trajectory"));
    }
    if arrow_every.is_nan() || arrow_every <= 0.0 {
        return Err(FormatError::Invalid(format!(
            "arrow spacing must be > 0, got {arrow_every}"
        )));
    }
    let (mut xmin, mut xmax, mut ymin, mut ymax) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for r in rows {
        xmin = xmin.min(r.x);
        xmax = xmax.max(r.x);
        ymin = ymin.min(r.y);
        ymax = ymax.max(r.y);
    }
    let span = (xmax - xmin).max(ymax - ymin).max(1e-3);
    let pad = 0.08 * span;
    let (xmin, xmax, ymin, ymax) = (xmin - pad, xmax + pad, ymin - pad, ymax + pad);
    let scale = PLOT_SIZE / (span + 2.0 * pad);
    let frame = Frame {
        x0: xmin,
        y1: ymax,
        scale,
    };
    let w = 2.0 * MARGIN + (xmax - xmin) * scale;
    let h = 2.0 * MARGIN + (ymax - ymin) * scale;

    let mut s = String::new();
    open_svg(&mut s, w, h);
    let _ = writeln!(
        s,
        r##"<rect x="{MARGIN}" y="{MARGIN}" width="{:.2}" height="{:.2}" fill="none" stroke="#888"/>"##,
        w - 2.0 * MARGIN,
        h - 2.0 * MARGIN
    );
    let _ = writeln!(
        s,
        r#"<text x="{MARGIN}" y="{:.2}">x {xmin:.3} .. {xmax:.3} m</text>"#,
        h - 0.4 * MARGIN
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" transform="rotate(-90 {:.2} {:.2})">y {ymin:.3} .. {ymax:.3} m</text>"#,
        0.6 * MARGIN,
        h - MARGIN,
        0.6 * MARGIN,
        h - MARGIN
    );

    let _ = write!(
        s,
        r#"<polyline fill="none" stroke="black" stroke-width="1.5" points=""#
    );
    for (i, r) in rows.iter().enumerate() {
        let (px, py) = frame.px(r.x, r.y);
        let sep = if i == 0 { "" } else { " " };
        let _ = write!(s, "{sep}{px:.2},{py:.2}");
    }
    let _ = writeln!(s, r#""/>"#);

    let len = 0.05 * PLOT_SIZE;
    let t0 = rows[0].t;
    let mut next = t0;
    let _ = writeln!(s, r##"<g class="arrows" stroke="#1f5fbf" fill="#1f5fbf">"##);
    for r in rows {
        if r.t + 1e-9 < next {
            continue;
        }
        next = t0 + (((r.t - t0) / arrow_every + 1e-9).floor() + 1.0) * arrow_every;
        let (px, py) = frame.px(r.x, r.y);
        let (dx, dy) = (-r.theta_t.sin(), -r.theta_t.cos());
        let (tx, ty) = (px + len * dx, py + len * dy);
        let head = 0.3 * len;
        let (nx, ny) = (-dy, dx);
        let _ = writeln!(
            s,
            r#"<line x1="{px:.2}" y1="{py:.2}" x2="{tx:.2}" y2="{ty:.2}" stroke-width="1"/><polygon points="{tx:.2},{ty:.2} {:.2},{:.2} {:.2},{:.2}"/>"#,
            tx - head * dx + 0.5 * head * nx,
            ty - head * dy + 0.5 * head * ny,
            tx - head * dx - 0.5 * head * nx,
            ty - head * dy - 0.5 * head * ny,
        );
    }
    let _ = writeln!(s, "</g>");

    let (sx, sy) = frame.px(rows[0].x, rows[0].y);
    let _ = writeln!(
        s,
        r#"<circle class="start" cx="{sx:.2}" cy="{sy:.2}" r="6" fill="green"/>"#
    );
    let last = &rows[rows.len() - 1];
    let (ex, ey) = frame.px(last.x, last.y);
    let k = 6.0;
    let _ = writeln!(
        s,
        r#"<g class="end" stroke="red" stroke-width="3"><line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/><line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/></g>"#,
        ex - k,
        ey - k,
        ex + k,
        ey + k,
        ex - k,
        ey + k,
        ex + k,
        ey - k
    );
    s.push_str("</svg>\n");
    Ok(s)
}

fn axis_label(kind: SweepKind) -> &'static str {
    match kind {
        SweepKind::Phi0 => "phi0 (rad)",
        SweepKind::Steering => "T1 / T2",
        SweepKind::Asymmetry => "epsilon",
    }
}

/// Signed radius against the swept value. Truncated rows are hollow red
/// circles at the truncation limit, or hollow red diamonds on the zero line
/// when the path is straight and has no sign. Dashed red lines mark plus and
/// minus one hull diameter.
pub fn sweep_svg(table: &SweepTable) -> Result<String, FormatError> {
    if table.rows.is_empty() {
        return Err(FormatError::Empty("sweep table"));
    }
    let (w, h) = (PLOT_SIZE + 2.0 * MARGIN, 0.65 * PLOT_SIZE + 2.0 * MARGIN);
    let grid = table.grid();
    let (gmin, gmax) = grid
        .iter()
        .fold((f64::MAX, f64::MIN), |(a, b), &v| (a.min(v), b.max(v)));
    let gpad = if gmax > gmin {
        0.06 * (gmax - gmin)
    } else {
        1.0
    };
    let (gmin, gmax) = (gmin - gpad, gmax + gpad);
    let ylim = 1.15 * table.truncation;
    let px = |v: f64| MARGIN + (v - gmin) / (gmax - gmin) * (w - 2.0 * MARGIN);
    let py = |r: f64| MARGIN + (ylim - r) / (2.0 * ylim) * (h - 2.0 * MARGIN);

    let mut s = String::new();
    open_svg(&mut s, w, h);
    let _ = writeln!(
        s,
        r##"<rect x="{MARGIN}" y="{MARGIN}" width="{:.2}" height="{:.2}" fill="none" stroke="#888"/>"##,
        w - 2.0 * MARGIN,
        h - 2.0 * MARGIN
    );
    for frac in [-1.0, -0.5, 0.0, 0.5, 1.0] {
        let r = frac * table.truncation;
        let y = py(r);
        let _ = writeln!(
            s,
            r##"<line x1="{MARGIN}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#ddd"/><text x="{:.2}" y="{:.2}" text-anchor="end">{r}</text>"##,
            w - MARGIN,
            MARGIN - 4.0,
            y + 4.0
        );
    }
    for v in &grid {
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="10">{}</text>"#,
            px(*v),
            h - MARGIN + 14.0,
            (v * 1e4).round() / 1e4
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        0.5 * w,
        h - 10.0,
        axis_label(table.kind)
    );
    let _ = writeln!(
        s,
        r#"<text x="14" y="{:.2}" transform="rotate(-90 14 {:.2})" text-anchor="middle">signed radius (m)</text>"#,
        0.5 * h,
        0.5 * h
    );
    for d in [table.hull_diameter, -table.hull_diameter] {
        let y = py(d);
        let _ = writeln!(
            s,
            r#"<line class="hull" x1="{MARGIN}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="red" stroke-dasharray="6,4"/>"#,
            w - MARGIN
        );
    }
    for row in &table.rows {
        let x = px(row.swept_value);
        let r = row.report.signed_radius;
        if !row.truncated() {
            let _ = writeln!(
                s,
                r##"<circle class="point" cx="{x:.2}" cy="{:.2}" r="4" fill="#1f5fbf"/>"##,
                py(r)
            );
        } else if r.is_nan() {
            let y = py(0.0);
            let _ = writeln!(
                s,
                r#"<polygon class="straight" points="{x:.2},{:.2} {:.2},{y:.2} {x:.2},{:.2} {:.2},{y:.2}" fill="none" stroke="red" stroke-width="1.5"/>"#,
                y - 6.0,
                x + 6.0,
                y + 6.0,
                x - 6.0
            );
        } else {
            let _ = writeln!(
                s,
                r#"<circle class="truncated" cx="{x:.2}" cy="{:.2}" r="5" fill="none" stroke="red" stroke-width="1.5"/>"#,
                py(table.truncation.copysign(r))
            );
        }
    }
    s.push_str("</svg>\n");
    Ok(s)
}

pub fn save(svg: &str, path: &Path) -> Result<(), FormatError> {
    fs::write(path, svg).map_err(FormatError::file(path))
}
