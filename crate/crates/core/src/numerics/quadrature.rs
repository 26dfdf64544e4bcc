//! Adaptive 15-point Gauss-Legendre quadrature with bisection.

use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::C64;

pub const GL_POINTS: usize = 15;
pub const DEFAULT_PANEL_CAP: usize = 20_000;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct QuadratureResult {
    pub value: C64,
    /// sum over accepted panels of |coarse - refined|
    pub error_estimate: f64,
    pub panels: usize,
}

impl QuadratureResult {
    pub fn zero() -> Self {
        QuadratureResult { value: C64::new(0.0, 0.0), error_estimate: 0.0, panels: 0 }
    }

    pub fn scaled(self, k: C64) -> Self {
        QuadratureResult { value: self.value * k, error_estimate: self.error_estimate * k.norm(), panels: self.panels }
    }

    pub fn plus(self, o: QuadratureResult) -> Self {
        QuadratureResult {
            value: self.value + o.value,
            error_estimate: self.error_estimate + o.error_estimate,
            panels: self.panels + o.panels,
        }
    }
}

/// Nodes and weights on [-1, 1], by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    (x, w)
}

fn rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(GL_POINTS))
}

/// Panel value and the same rule applied to |f|.
fn panel<F: Fn(f64) -> C64>(f: &F, a: f64, b: f64) -> (C64, f64) {
    let (x, w) = rule();
    let (h, mid) = (0.5 * (b - a), 0.5 * (a + b));
    let mut acc = C64::new(0.0, 0.0);
    let mut mag = 0.0;
    for (xi, wi) in x.iter().zip(w) {
        let v = f(mid + h * xi);
        acc += v * *wi;
        mag += v.norm() * wi;
    }
    (acc * h, mag * h.abs())
}

/// Integrates f over [a, b] to absolute tolerance `tol`.
///
/// A panel is accepted when its two halves agree with it to within its share
/// of `tol`, or to within rounding of the integral of |f| over it; the halves are kept. Panels are processed left to right, so the
/// summation order is deterministic.
pub fn integrate<F: Fn(f64) -> C64>(f: F, a: f64, b: f64, tol: f64, cap: usize) -> Result<QuadratureResult> {
    if !(tol > 0.0) {
        return Err(Error::Malformed("quadrature tolerance must be positive".into()));
    }
    let len = b - a;
    let mut out = QuadratureResult::zero();
    let mut stack = vec![(a, b, panel(&f, a, b).0, 0u32)];
    let mut used = 1usize;
    while let Some((lo, hi, whole, depth)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        let (left, lmag) = panel(&f, lo, mid);
        let (right, rmag) = panel(&f, mid, hi);
        used += 2;
        let err = (left + right - whole).norm();
        let share = tol * ((hi - lo) / len).abs();
        if !err.is_finite() || !(left + right).re.is_finite() || !(left + right).im.is_finite() {
            return Err(Error::Numerical(format!("non-finite integrand near t = {mid}")));
        }
        if err <= share || err <= 64.0 * f64::EPSILON * (lmag + rmag) || depth >= 60 || (hi - lo) < 1e-15 * len.abs().max(1.0) {
            out.value += left + right;
            out.error_estimate += err;
            out.panels += 2;
            continue;
        }
        if used > cap {
            return Err(Error::Numerical(format!(
                "quadrature did not converge within {cap} panels (last error {err:.3e})"
            )));
        }
        // right first so the left half is popped next
        stack.push((mid, hi, right, depth + 1));
        stack.push((lo, mid, left, depth + 1));
    }
    Ok(out)
}
