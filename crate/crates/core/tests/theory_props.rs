use hillpath::theory::{analyze, calibrate, g, q, root_z, ModelParams, DEFAULT_TOL};
use proptest::prelude::*;

fn params(a: f64, k: u32) -> ModelParams {
    ModelParams::new(a, k).unwrap()
}

#[test]
fn derivative_identity_holds_on_a_grid() {
    // x^(k+1)·e^(−x)·g'(x) = q(x), with g' by central differences
    for &(a, k) in &[(0.25, 4u32), (1.0, 4), (0.003, 5), (10.0, 3)] {
        let p = params(a, k);
        for i in 0..200 {
            let x = 0.2 + 5.8 * i as f64 / 199.0;
            let h = 1e-5 * x;
            let dg = (g(&p, x + h).unwrap() - g(&p, x - h).unwrap()) / (2.0 * h);
            let lhs = x.powi(k as i32 + 1) * (-x).exp() * dg;
            let rhs = q(&p, x).unwrap();
            let scale = rhs.abs().max(1.0);
            assert!(
                (lhs - rhs).abs() / scale <= 1e-4,
                "a={a} k={k} x={x}: {lhs} vs {rhs}"
            );
        }
    }
}

#[test]
fn q_changes_sign_once() {
    for &(a, k) in &[(0.25, 4u32), (1.0, 4), (1e-4, 6), (50.0, 5)] {
        let p = params(a, k);
        let values: Vec<f64> = (1..=4000)
            .map(|i| q(&p, i as f64 * 0.0025).unwrap())
            .collect();
        let changes = values
            .windows(2)
            .filter(|w| (w[0] < 0.0) != (w[1] < 0.0))
            .count();
        assert_eq!(changes, 1, "a={a} k={k}");
    }
}

#[test]
fn root_decreases_in_a() {
    let mut prev = f64::INFINITY;
    for e in -60..=60 {
        let a = 10f64.powf(e as f64 / 10.0);
        let z = root_z(&params(a, 4), DEFAULT_TOL).unwrap();
        assert!(z > 1.0 && z < 4.0);
        assert!(z < prev, "a={a}");
        prev = z;
    }
}

#[test]
fn root_minimizes_g_on_a_dense_grid() {
    for &(a, k) in &[(0.25, 4u32), (0.003215, 4), (2.0, 5)] {
        let p = params(a, k);
        let best = analyze(&p, None).unwrap();
        for i in 1..=2000 {
            let x = i as f64 * (k as f64 + 2.0) / 2000.0;
            assert!(
                g(&p, x).unwrap() >= best.g_at_min * (1.0 - 1e-12),
                "a={a} x={x}"
            );
        }
    }
}

#[test]
fn every_grid_rate_is_reachable() {
    for i in 101..=399 {
        let c = i as f64 / 100.0;
        let z = root_z(&params(calibrate(c, 4).unwrap(), 4), DEFAULT_TOL).unwrap();
        assert!((z - c).abs() <= 1e-8, "c={c}: {z}");
    }
}

proptest! {
    #[test]
    fn calibrate_inverts_root(c in 1.001f64..3.999) {
        let a = calibrate(c, 4).unwrap();
        let z = root_z(&params(a, 4), DEFAULT_TOL).unwrap();
        prop_assert!((z - c).abs() <= 1e-8);
    }

    #[test]
    fn root_inverts_calibrate(log_a in -8f64..4.0, k in 3u32..8) {
        let a = 10f64.powf(log_a);
        let z = root_z(&params(a, k), DEFAULT_TOL).unwrap();
        let back = calibrate(z, k).unwrap();
        prop_assert!((back / a - 1.0).abs() <= 1e-6);
    }
}
