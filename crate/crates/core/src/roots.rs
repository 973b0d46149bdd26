//! Scalar root finding and 1-D minimization.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RootTrace {
    pub bracket: [f64; 2],
    pub iterations: usize,
    pub residual: f64,
}

/// Bisection on `[lo, hi]` where `f(lo)` and `f(hi)` have opposite signs (or one
/// is zero). Stops when the bracket is narrower than `xtol` or `|f| <= ftol`.
pub fn bisect(f: impl Fn(f64) -> f64, lo: f64, hi: f64, xtol: f64, ftol: f64) -> Option<(f64, RootTrace)> {
    let (mut a, mut b) = (lo, hi);
    let (mut fa, fb) = (f(a), f(b));
    if fa == 0.0 {
        return Some((a, RootTrace { bracket: [lo, hi], iterations: 0, residual: 0.0 }));
    }
    if fb == 0.0 {
        return Some((b, RootTrace { bracket: [lo, hi], iterations: 0, residual: 0.0 }));
    }
    if fa.signum() == fb.signum() || !fa.is_finite() || !fb.is_finite() {
        return None;
    }
    let mut iterations = 0;
    let mut m = 0.5 * (a + b);
    let mut fm = f(m);
    while iterations < 200 {
        iterations += 1;
        m = 0.5 * (a + b);
        fm = f(m);
        if fm == 0.0 || (b - a) < xtol && fm.abs() <= ftol {
            break;
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
        if b - a <= f64::EPSILON * m.abs() {
            break;
        }
    }
    Some((
        m,
        RootTrace {
            bracket: [lo, hi],
            iterations,
            residual: fm.abs(),
        },
    ))
}

/// Secant iteration from `x0`, `x1`; an independent cross-check for bisection.
pub fn secant(f: impl Fn(f64) -> f64, mut x0: f64, mut x1: f64, tol: f64) -> Option<f64> {
    let mut f0 = f(x0);
    for _ in 0..100 {
        let f1 = f(x1);
        if f1 == 0.0 {
            return Some(x1);
        }
        let denom = f1 - f0;
        if denom == 0.0 {
            return None;
        }
        let x2 = x1 - f1 * (x1 - x0) / denom;
        if (x2 - x1).abs() < tol {
            return Some(x2);
        }
        x0 = x1;
        f0 = f1;
        x1 = x2;
    }
    None
}

/// Golden-section search for the minimum of a unimodal `f` on `[a, b]`.
pub fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, xtol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > xtol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}
