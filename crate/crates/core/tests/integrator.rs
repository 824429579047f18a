use modboat_core::{
    angular_momentum, default_params, simulate, Asymmetry, InputTuple, SimConfig, SimState,
};

fn reference() -> InputTuple {
    InputTuple::new(1.0, 1.0, 2.0, 0.0).unwrap()
}

#[test]
fn fluidless_run_conserves_angular_momentum() {
    let p = default_params().fluidless();
    let u = reference();
    let traj = simulate(&p, Asymmetry::NONE, &u, &SimConfig::default()).unwrap();
    let h0 = angular_momentum(&SimState::REST, u.phi_dot(0.0), &p);
    let scale = p.drive_inertia * u.amplitude().abs() * u.omega1();
    let drift = traj
        .rows
        .iter()
        .map(|r| {
            let s = SimState {
                thetadot: r.thetadot,
                ..SimState::REST
            };
            (angular_momentum(&s, u.phi_dot(r.t), &p) - h0).abs() / scale
        })
        .fold(0.0, f64::max);
    assert!(drift <= 1e-6, "relative drift {drift:e}");
    // no fluid, no thrust: the body only counter-rotates in place
    let last = traj.rows.last().unwrap();
    assert_eq!((last.x, last.y), (0.0, 0.0));
}

#[test]
fn simulation_is_deterministic() {
    let p = default_params();
    let u = InputTuple::new(1.2, 0.8, 1.5, 0.1).unwrap();
    let c = SimConfig {
        duration: 10.0,
        ..SimConfig::default()
    };
    let eps = Asymmetry::new(0.05).unwrap();
    let a = simulate(&p, eps, &u, &c).unwrap();
    let b = simulate(&p, eps, &u, &c).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.len(), 1201);
}

#[test]
fn mirrored_input_gives_mirrored_trajectory() {
    let p = default_params();
    let c = SimConfig::default();
    for (u, eps) in [
        (InputTuple::new(1.0, 1.0, 2.0, 0.0).unwrap(), 0.0),
        (InputTuple::new(1.1, 0.9, 2.0, 0.2).unwrap(), 0.1),
        (InputTuple::new(0.8, 1.25, 1.5, -0.3).unwrap(), -0.05),
    ] {
        let eps = Asymmetry::new(eps).unwrap();
        let a = simulate(&p, eps, &u, &c).unwrap().mirrored();
        let b = simulate(&p, eps.negated(), &u.mirrored(), &c).unwrap();
        assert_eq!(a.len(), b.len());
        let worst = a
            .rows
            .iter()
            .zip(&b.rows)
            .flat_map(|(ra, rb)| {
                ra.to_array()
                    .into_iter()
                    .zip(rb.to_array())
                    .map(|(x, y)| (x - y).abs())
            })
            .fold(0.0, f64::max);
        assert!(worst <= 1e-9, "{u}: worst deviation {worst:e}");
    }
}

fn final_state(dt: f64) -> [f64; 6] {
    let c = SimConfig {
        dt,
        duration: 5.0,
        sample_rate: 10.0,
        ..SimConfig::default()
    };
    let t = simulate(&default_params(), Asymmetry::NONE, &reference(), &c).unwrap();
    let r = t.rows.last().unwrap();
    [r.x, r.y, r.theta, r.xdot, r.ydot, r.thetadot]
}

fn distance(a: &[f64; 6], b: &[f64; 6]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

#[test]
fn rk4_converges_at_fourth_order() {
    let reference = final_state(1e-3 / 16.0);
    let coarse = distance(&final_state(2e-3), &reference);
    let fine = distance(&final_state(1e-3), &reference);
    let ratio = coarse / fine;
    assert!((12.0..=20.0).contains(&ratio), "error ratio {ratio}");
}

#[test]
fn output_rows_include_every_sample_time() {
    let c = SimConfig {
        duration: 2.0,
        ..SimConfig::default()
    };
    let u = InputTuple::new(1.3, 0.7, 2.0, 0.0).unwrap();
    let t = simulate(&default_params(), Asymmetry::NONE, &u, &c).unwrap();
    assert_eq!(t.len(), 241);
    for (k, r) in t.rows.iter().enumerate() {
        assert_eq!(r.t, k as f64 / 120.0);
        assert_eq!(r.theta_t, r.theta + r.phi);
        assert_eq!(r.phi, u.phi(r.t));
    }
}
