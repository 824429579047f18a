use modboat_core::InputTuple;
use proptest::prelude::*;

fn tuple() -> impl Strategy<Value = InputTuple> {
    (0.2f64..3.0, 0.2f64..3.0, -3.0f64..3.0, -1.0f64..1.0)
        .prop_map(|(t1, t2, a, phi0)| InputTuple::new(t1, t2, a, phi0).unwrap())
}

proptest! {
    #[test]
    fn phi_is_continuous_at_stroke_boundaries(u in tuple(), k in 0u32..6) {
        let p = u.period();
        for b in [k as f64 * p + 0.5 * u.t1(), (k + 1) as f64 * p] {
            let h = 1e-9 * (1.0 + b);
            let w = u.omega1().max(u.omega2());
            let slope = u.amplitude().abs() * w;
            prop_assert!((u.phi(b - h) - u.phi(b + h)).abs() < 1e-9 + 4.0 * h * slope);
            prop_assert!((u.phi_dot(b - h) - u.phi_dot(b + h)).abs() < 1e-9 + 4.0 * h * slope * w);
        }
    }

    #[test]
    fn phi_is_periodic(u in tuple(), t in 0.0f64..5.0) {
        let p = u.period();
        prop_assert!((u.phi(t) - u.phi(t + 3.0 * p)).abs() < 1e-9 * (1.0 + u.amplitude().abs()));
    }

    #[test]
    fn derivatives_match_finite_differences(u in tuple(), t in 0.0f64..5.0) {
        let p = u.period();
        let tau = t % p;
        let b = 0.5 * u.t1();
        let h = 1e-5;
        // stay clear of the boundaries where phi'' jumps
        prop_assume!((tau - b).abs() > 10.0 * h && tau > 10.0 * h && p - tau > 10.0 * h);
        let fd1 = (u.phi(t + h) - u.phi(t - h)) / (2.0 * h);
        let fd2 = (u.phi_dot(t + h) - u.phi_dot(t - h)) / (2.0 * h);
        let w = u.omega1().max(u.omega2());
        let scale = 1.0 + u.amplitude().abs() * w * w;
        prop_assert!((fd1 - u.phi_dot(t)).abs() < 1e-6 * scale);
        prop_assert!((fd2 - u.phi_ddot(t)).abs() < 1e-5 * scale * w);
    }

    #[test]
    fn cycle_mean_is_midpoint(u in tuple()) {
        let p = u.period();
        let n = 20_000;
        let h = p / n as f64;
        let mean = (0..n).map(|k| u.phi((k as f64 + 0.5) * h)).sum::<f64>() / n as f64;
        prop_assert!((mean - u.midpoint()).abs() < 1e-6 * (1.0 + u.amplitude().abs()));
    }

    #[test]
    fn display_round_trips(u in tuple()) {
        let parsed: InputTuple = u.to_string().parse().unwrap();
        prop_assert_eq!(parsed, u);
    }
}
