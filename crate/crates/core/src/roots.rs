//! Bracketed scalar root finding.

use crate::error::{Error, Result};

const MAX_BISECTIONS: usize = 200;
const POLISH_STEPS: usize = 4;

/// Root of `f` on `[lo, hi]` where `f(lo) < 0 < f(hi)`.
///
/// Bisects until the bracket is narrower than `tol`, then takes a few Newton
/// steps with `df`, keeping any step that stays inside the final bracket and
/// does not increase `|f|`.
pub fn bisect_newton<F, D>(f: F, df: D, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Domain(format!(
            "tolerance must be positive (got {tol})"
        )));
    }
    if lo.is_nan() || hi.is_nan() || lo >= hi {
        return Err(Error::Domain(format!("empty bracket [{lo}, {hi}]")));
    }
    let (flo, fhi) = (f(lo), f(hi));
    if !(flo < 0.0 && fhi > 0.0) {
        return Err(Error::Domain(format!(
            "no sign change on [{lo}, {hi}]: f(lo) = {flo}, f(hi) = {fhi}"
        )));
    }
    let (mut a, mut b) = (lo, hi);
    for _ in 0..MAX_BISECTIONS {
        if b - a <= tol {
            break;
        }
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm < 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    let mut x = 0.5 * (a + b);
    let mut fx = f(x);
    for _ in 0..POLISH_STEPS {
        let slope = df(x);
        if slope == 0.0 || !slope.is_finite() {
            break;
        }
        let next = x - fx / slope;
        if !(next >= a && next <= b) {
            break;
        }
        let fnext = f(next);
        if fnext.abs() > fx.abs() {
            break;
        }
        x = next;
        fx = fnext;
        if fx == 0.0 {
            break;
        }
    }
    Ok(x)
}

/// Minimizer of a smooth function on `(lo, hi)` given a function with the same
/// sign as its derivative (`dsign`) and the derivative of that (`ddsign`).
/// The derivative must go from negative at `lo` to positive at `hi`.
pub fn minimize_stationary<F, D>(dsign: F, ddsign: D, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    bisect_newton(dsign, ddsign, lo, hi, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_root_of_two() {
        let x = bisect_newton(|x| x * x - 2.0, |x| 2.0 * x, 0.0, 2.0, 1e-12).unwrap();
        assert!((x - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn requires_bracket() {
        assert!(bisect_newton(|x| x * x + 1.0, |x| 2.0 * x, -1.0, 1.0, 1e-9).is_err());
        assert!(bisect_newton(|x| x, |_| 1.0, 1.0, -1.0, 1e-9).is_err());
        assert!(bisect_newton(|x| x, |_| 1.0, -1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn flat_derivative_falls_back_to_bisection() {
        let x = bisect_newton(|x: f64| x.powi(3), |_| 0.0, -1.0, 2.0, 1e-12).unwrap();
        assert!(x.abs() < 1e-11);
    }
}
