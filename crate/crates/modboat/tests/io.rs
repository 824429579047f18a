use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;

use modboat::{mocap, tables, trajectory_csv};
use modboat_core::experiments::reference_input;
use modboat_core::{
    analyze, curvature_report, default_params, simulate, AnalysisSettings, Asymmetry, InputTuple,
    ReportOptions, SimConfig, Trajectory, TrajectoryMeta, TrajectoryRow, WindowSpec,
};

fn circle_rows(r: f64, omega: f64, n: usize) -> Vec<TrajectoryRow> {
    (0..n)
        .map(|k| {
            let t = k as f64 / 120.0;
            let a = omega * t;
            TrajectoryRow {
                t,
                x: 0.3 + r * a.cos(),
                y: -1.2 + r * a.sin(),
                theta: a + 0.5 * PI,
                theta_t: a + 0.5 * PI,
                ..TrajectoryRow::default()
            }
        })
        .collect()
}

fn wrap(a: f64) -> f64 {
    (a + PI).rem_euclid(TAU) - PI
}

#[test]
fn ingested_circle_measures_like_the_in_memory_one() {
    let rows = circle_rows(0.8, 0.4, 3601);
    let direct = Trajectory::new(rows.clone(), TrajectoryMeta::default());

    let mut text = String::from("t,x,y,theta\n");
    for r in &rows {
        writeln!(text, "{:?},{:?},{:?},{:?}", r.t, r.x, r.y, wrap(r.theta)).unwrap();
    }
    let ingested = mocap::ingest(text.as_bytes()).unwrap().trajectory;

    let s = AnalysisSettings::default();
    let hull = default_params().hull_diameter;
    let (_, a, _) = analyze(&direct, &s, hull).unwrap();
    let (_, b, mb) = analyze(&ingested, &s, hull).unwrap();
    assert!((a.signed_radius - 0.8).abs() < 1e-9);
    assert!((a.signed_radius - b.signed_radius).abs() < 1e-9);
    assert!((mb.mean_speed - 0.32).abs() < 1e-3);
}

#[test]
fn simulated_trajectories_round_trip_bit_exactly() {
    let p = default_params();
    let c = SimConfig {
        duration: 5.0,
        ..SimConfig::default()
    };
    for (u, eps) in [
        (reference_input(), 0.0),
        (InputTuple::new(0.7, 1.3, -1.5, 0.25).unwrap(), -0.07),
    ] {
        let t = simulate(&p, Asymmetry::new(eps).unwrap(), &u, &c).unwrap();
        let mut buf = Vec::new();
        trajectory_csv::write_trajectory(&t, &mut buf).unwrap();
        let back = trajectory_csv::read_trajectory(buf.as_slice()).unwrap();
        assert_eq!(back.meta, t.meta);
        for (a, b) in back.rows.iter().zip(&t.rows) {
            assert_eq!(
                a.to_array().map(f64::to_bits),
                b.to_array().map(f64::to_bits)
            );
        }
        assert_eq!(back.len(), t.len());
    }
}

#[test]
fn saved_trajectory_keeps_its_cycle_for_analysis() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("asym.csv");
    let p = default_params();
    let t = simulate(
        &p,
        Asymmetry::new(0.1).unwrap(),
        &reference_input(),
        &SimConfig::default(),
    )
    .unwrap();
    trajectory_csv::save(&t, &path).unwrap();
    let back = trajectory_csv::load(&path).unwrap();
    let w = WindowSpec::fixed(10.0, 30.0).unwrap();
    let a = curvature_report(&t, &w, &ReportOptions::default()).unwrap();
    let b = curvature_report(&back, &w, &ReportOptions::default()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn wrapped_angles_and_gaps_in_mocap() {
    // steady spin at 3 rad/s, wrapped to (-pi, pi], with two dropouts and
    // four NaN rows
    let mut text = String::from("t,x,y,theta,theta_t\n");
    let mut kept = 0;
    for k in 0..1200 {
        if (300..340).contains(&k) || (800..810).contains(&k) {
            continue;
        }
        let t = k as f64 / 120.0;
        let th = 3.0 * t;
        if k % 250 == 7 {
            writeln!(text, "{t},nan,0,{},{}", wrap(th), wrap(th + 0.2)).unwrap();
            continue;
        }
        kept += 1;
        writeln!(
            text,
            "{t},{},{},{},{}",
            0.01 * t,
            0.0,
            wrap(th),
            wrap(th + 0.2)
        )
        .unwrap();
    }
    let ing = mocap::ingest(text.as_bytes()).unwrap();
    let rows = &ing.trajectory.rows;
    assert_eq!(rows.len(), kept);
    assert_eq!(ing.dropped, 5);
    assert_eq!(ing.gaps.len(), 2);
    assert_eq!(ing.trajectory.meta.notes["gap_count"], "2");
    for w in rows.windows(2) {
        assert!(w[1].theta > w[0].theta);
    }
    for r in rows {
        assert!((r.theta - 3.0 * r.t).abs() < 1e-9, "t={}", r.t);
        assert!((r.phi - 0.2).abs() < 1e-9);
        assert!((r.thetadot - 3.0).abs() < 1e-6);
    }
}

#[test]
fn report_csv_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.csv");
    let t = simulate(
        &default_params(),
        Asymmetry::NONE,
        &reference_input(),
        &SimConfig::default(),
    )
    .unwrap();
    let (_, report, metrics) = analyze(
        &t,
        &AnalysisSettings::default(),
        default_params().hull_diameter,
    )
    .unwrap();
    let row = tables::ReportRow {
        label: "reference".into(),
        report,
        metrics,
    };
    tables::save_reports(&[row], &path).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with(
        "label,signed_radius,truncated,rms_residual,mean_speed,net_heading_drift,n_points,t_start,t_end\n"
    ));
    assert!(text
        .lines()
        .nth(1)
        .unwrap()
        .starts_with("reference,NaN,true,"));
}
