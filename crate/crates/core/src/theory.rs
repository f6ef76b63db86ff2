//! Runtime model for the (1+1) EA on HillPathJump.
//!
//! With mutation rate `c/n` the expected optimization time is
//! `g_a(c)·n^k` to leading order, where `g_a(x) = (a/x + 1/x^k)·e^x`. The
//! minimizer of `g_a` is the unique root in `(1, k)` of
//! `q_a(x) = a·x^(k−1)·(x − 1) + x − k`, since `x^(k+1)·e^(−x)·g_a'(x) = q_a(x)`
//! and `q_a` is negative on `(0, 1]` and increasing on `[1, ∞)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::roots::minimize_stationary;

pub const DEFAULT_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    a: f64,
    k: u32,
}

impl ModelParams {
    pub fn new(a: f64, k: u32) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::Domain(format!(
                "a must be positive and finite (got {a})"
            )));
        }
        if k < 2 {
            return Err(Error::Domain(format!("k must be at least 2 (got {k})")));
        }
        Ok(Self { a, k })
    }

    /// Effective coefficient `L / n^(k−1)` of an explicit path length.
    pub fn for_path_length(path_len: f64, n: f64, k: u32) -> Result<Self> {
        Self::new(path_len / n.powi(k as i32 - 1), k)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn k(&self) -> u32 {
        self.k
    }
}

fn check_positive(x: f64) -> Result<()> {
    if x.is_nan() || x <= 0.0 {
        return Err(Error::Domain(format!("x must be positive (got {x})")));
    }
    Ok(())
}

/// `g_a(x) = (a/x + 1/x^k)·e^x`.
pub fn g(params: &ModelParams, x: f64) -> Result<f64> {
    check_positive(x)?;
    Ok(g_raw(params, x))
}

fn g_raw(params: &ModelParams, x: f64) -> f64 {
    (params.a / x + x.powi(-(params.k as i32))) * x.exp()
}

/// `q_a(x) = a·x^k − a·x^(k−1) + x − k`.
pub fn q(params: &ModelParams, x: f64) -> Result<f64> {
    check_positive(x)?;
    Ok(q_raw(params, x))
}

fn q_raw(params: &ModelParams, x: f64) -> f64 {
    let k = params.k as i32;
    params.a * x.powi(k - 1) * (x - 1.0) + x - k as f64
}

fn q_prime(params: &ModelParams, x: f64) -> f64 {
    let k = params.k as f64;
    params.a * x.powi(params.k as i32 - 2) * (k * x - (k - 1.0)) + 1.0
}

/// The root `Z(a)` of `q_a` in `(1, k)`, which is also the minimizer of `g_a`.
pub fn root_z(params: &ModelParams, tol: f64) -> Result<f64> {
    minimize_stationary(
        |x| q_raw(params, x),
        |x| q_prime(params, x),
        1.0,
        params.k as f64,
        tol,
    )
}

/// The coefficient `a` whose root `Z(a)` equals `c`.
pub fn calibrate(c: f64, k: u32) -> Result<f64> {
    if k < 2 {
        return Err(Error::Domain(format!("k must be at least 2 (got {k})")));
    }
    let kf = k as f64;
    if !(c > 1.0 && c < kf) {
        return Err(Error::Domain(format!("c must lie in (1, {k}) (got {c})")));
    }
    Ok((kf - c) / (c.powi(k as i32 - 1) * (c - 1.0)))
}

/// Leading-order expected runtime `g_a(c)·n^k`.
pub fn predicted_runtime(params: &ModelParams, n: f64, c: f64) -> Result<f64> {
    Ok(g(params, c)? * n.powi(params.k as i32))
}

/// Leading-order expected runtime for an explicit path length,
/// `e^c·(L·n/c + n^k/c^k)`.
pub fn predicted_runtime_for_length(path_len: f64, n: f64, k: u32, c: f64) -> Result<f64> {
    check_positive(c)?;
    Ok(c.exp() * (path_len * n / c + (n / c).powi(k as i32)))
}

/// Expected one-step progress along the path, `c·e^(−c)/n`.
pub fn drift_prediction(n: f64, c: f64) -> f64 {
    c * (-c).exp() / n
}

/// Exact probability that one mutation turns `x+` into `x*`:
/// `(c/n)^k·(1 − c/n)^(n−k)`.
pub fn jump_success_probability(n: f64, k: u32, c: f64) -> Result<f64> {
    if !(c > 0.0 && c < n) {
        return Err(Error::Domain(format!(
            "c must lie in (0, n) = (0, {n}) (got {c})"
        )));
    }
    let p = c / n;
    let k = k as f64;
    Ok((k * p.ln() + (n - k) * (-p).ln_1p()).exp())
}

/// `argmin_{x>0} (e^x − 1)/x²`, the optimal rate constant for LeadingOnes.
pub fn leadingones_constant() -> f64 {
    // d/dx (e^x − 1)/x² = ((x − 2)e^x + 2)/x³
    minimize_stationary(
        |x: f64| (x - 2.0) * x.exp() + 2.0,
        |x: f64| (x - 1.0) * x.exp(),
        1.0,
        2.5,
        DEFAULT_TOL,
    )
    .expect("bracket [1, 2.5] holds a sign change")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoryResult {
    pub a: f64,
    pub k: u32,
    pub c_star: f64,
    pub g_at_min: f64,
    pub n: Option<f64>,
    pub predicted_runtime: Option<f64>,
}

impl TheoryResult {
    pub fn predicted_runtime_at(&self, n: f64) -> f64 {
        self.g_at_min * n.powi(self.k as i32)
    }
}

/// Optimal rate constant, model minimum and (optionally) the predicted runtime
/// at that rate for dimension `n`.
pub fn analyze(params: &ModelParams, n: Option<f64>) -> Result<TheoryResult> {
    let c_star = root_z(params, DEFAULT_TOL)?;
    let g_at_min = g(params, c_star)?;
    Ok(TheoryResult {
        a: params.a,
        k: params.k,
        c_star,
        g_at_min,
        n,
        predicted_runtime: n.map(|n| g_at_min * n.powi(params.k as i32)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(a: f64, k: u32) -> ModelParams {
        ModelParams::new(a, k).unwrap()
    }

    #[test]
    fn g_values() {
        let e = 1f64.exp();
        assert!((g(&params(1.0, 4), 1.0).unwrap() - 2.0 * e).abs() < 1e-12);
        let expected = (0.125 + 0.0625) * 2f64.exp();
        assert!((g(&params(0.25, 4), 2.0).unwrap() - expected).abs() < 1e-12);
        assert!((expected - 1.38546).abs() < 2e-5);
        assert!(g(&params(1.0, 4), 0.0).is_err());
        assert!(g(&params(1.0, 4), -1.0).is_err());
    }

    #[test]
    fn g_blows_up_at_both_ends() {
        let p = params(1.0, 4);
        let min = analyze(&p, None).unwrap().g_at_min;
        assert!(g(&p, 1e-6).unwrap() >= 1e6 * min);
        assert!(g(&p, 50.0).unwrap() >= 1e6 * min);
    }

    #[test]
    fn q_values() {
        assert_eq!(q(&params(1.0, 4), 1.0).unwrap(), -3.0);
        assert!(q(&params(0.25, 4), 2.0).unwrap().abs() < 1e-15);
        assert!((q(&params(1.0, 4), 1.6).unwrap() - 0.0576).abs() < 1e-12);
        for &(a, k, x) in &[(0.3f64, 4u32, 0.7f64), (2.0, 5, 1.3), (1e-3, 6, 5.5)] {
            let expanded = a * x.powi(k as i32) - a * x.powi(k as i32 - 1) + x - k as f64;
            assert!((q(&params(a, k), x).unwrap() - expanded).abs() < 1e-12);
        }
    }

    #[test]
    fn root_examples() {
        assert!((root_z(&params(0.25, 4), DEFAULT_TOL).unwrap() - 2.0).abs() < 1e-10);
        let z = root_z(&params(1e6, 4), DEFAULT_TOL).unwrap();
        assert!(z > 1.0 && z < 1.01);
        let z = root_z(&params(1e-9, 4), DEFAULT_TOL).unwrap();
        assert!(z > 3.99 && z < 4.0);
        let z = root_z(&params(1.0, 4), DEFAULT_TOL).unwrap();
        assert!(q(&params(1.0, 4), z - 1e-6).unwrap() < 0.0);
        assert!(q(&params(1.0, 4), z + 1e-6).unwrap() > 0.0);
    }

    #[test]
    fn calibrate_examples() {
        assert_eq!(calibrate(2.0, 4).unwrap(), 0.25);
        assert!(calibrate(3.999, 4).unwrap() < 1e-3);
        assert!(calibrate(1.0, 4).is_err());
        assert!(calibrate(4.0, 4).is_err());
        assert!(calibrate(0.5, 4).is_err());
    }

    #[test]
    fn runtime_predictions() {
        let p = params(0.25, 4);
        let t = predicted_runtime(&p, 10.0, 2.0).unwrap();
        assert!((t / 1e4 - 1.38546).abs() < 2e-5);
        let t = predicted_runtime_for_length(20.0, 16.0, 4, 2.0).unwrap();
        assert!((t - 2f64.exp() * 4256.0).abs() < 1e-8);
        assert!((t - 3.145e4).abs() < 5.0);
        // both forms agree when a = L / n^(k−1)
        let q = ModelParams::for_path_length(150.0, 36.0, 4).unwrap();
        for c in [1.0, 2.5, 3.7] {
            let x = predicted_runtime(&q, 36.0, c).unwrap();
            let y = predicted_runtime_for_length(150.0, 36.0, 4, c).unwrap();
            assert!((x / y - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn drift_and_jump() {
        assert!((drift_prediction(100.0, 1.0) - (-1f64).exp() / 100.0).abs() < 1e-18);
        assert!((drift_prediction(49.0, 2.0) - 0.005524).abs() < 1e-6);
        assert!(drift_prediction(100.0, 1.0) > drift_prediction(100.0, 0.9));
        assert!(drift_prediction(100.0, 1.0) > drift_prediction(100.0, 1.1));
        let p = jump_success_probability(16.0, 4, 2.0).unwrap();
        assert!((p - 0.125f64.powi(4) * 0.875f64.powi(12)).abs() < 1e-18);
        assert!((p / 4.90e-5 - 1.0).abs() < 0.01);
        assert!(jump_success_probability(16.0, 4, 16.0).is_err());
        let n = 1e4f64;
        let limit = 2f64.powi(4) * (-2f64).exp() / n.powi(4);
        let ratio = jump_success_probability(n, 4, 2.0).unwrap() / limit;
        assert!((0.9..=1.1).contains(&ratio));
    }

    #[test]
    fn leadingones() {
        let c = leadingones_constant();
        assert!((1.5931..=1.5941).contains(&c));
        assert!(((c - 2.0) * c.exp() + 2.0).abs() < 1e-8);
        let f = |x: f64| (x.exp() - 1.0) / (x * x);
        assert!(f(1.0) > f(c) && f(2.5) > f(c));
    }

    #[test]
    fn analyze_reports_prediction() {
        let r = analyze(&params(0.25, 4), Some(10.0)).unwrap();
        assert!((r.c_star - 2.0).abs() < 1e-10);
        assert!((r.predicted_runtime.unwrap() - r.predicted_runtime_at(10.0)).abs() < 1e-9);
    }
}
