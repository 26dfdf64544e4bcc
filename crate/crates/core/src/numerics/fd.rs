//! The Lauricella F_D series and its Euler integral.

use serde::Serialize;

use super::gamma::{gamma, rgamma};
use super::quadrature::{integrate, DEFAULT_PANEL_CAP};
use crate::error::{domain, malformed, Error, Result};
use crate::linalg::C64;

#[derive(Clone, Debug, Serialize)]
pub struct SeriesValue {
    pub value: C64,
    /// highest total degree summed
    pub degree: usize,
    /// geometric majorant of the remaining shells
    pub tail_bound: f64,
}

const MAX_DEGREE: usize = 20_000;

fn check_c(c: C64) -> Result<()> {
    if c.im == 0.0 && c.re <= 0.0 && (c.re - c.re.round()).abs() < 1e-12 {
        return domain(format!("c = {} is a non-positive integer", c.re));
    }
    Ok(())
}

fn check_disc(x: &[C64]) -> Result<()> {
    for (i, xi) in x.iter().enumerate() {
        if !(xi.norm() < 1.0) {
            return domain(format!("|x_{}| = {} is not below 1", i + 1, xi.norm()));
        }
    }
    Ok(())
}

/// F_D(a, b; c; x) summed shell by shell in the total degree.
///
/// A shell is the degree-N coefficient of prod_i G_i(z) with
/// G_i = sum_k (b_i)_k x_i^k / k! z^k, formed by left-to-right convolution, times
/// (a)_N / (c)_N. Summation stops once the ratio of successive shells of absolute
/// values has settled below one and the geometric tail it implies, taken with the
/// larger of that ratio and max |x_i|, is below `tol`.
pub fn fd_series(a: C64, b: &[C64], c: C64, x: &[C64], tol: f64) -> Result<SeriesValue> {
    if b.len() != x.len() || b.is_empty() {
        return malformed("b and x must have the same positive length");
    }
    if !(tol > 0.0) {
        return malformed("tolerance must be positive");
    }
    check_c(c)?;
    check_disc(x)?;
    let m = b.len();
    let rho = x.iter().map(|z| z.norm()).fold(0.0, f64::max);
    // g[i][k] = (b_i)_k x_i^k / k!
    let mut g: Vec<Vec<C64>> = vec![vec![C64::new(1.0, 0.0)]; m];
    // partial products: prod[i][N] = degree-N coefficient of G_1 .. G_{i+1}, with |.| twins
    let mut prod: Vec<Vec<C64>> = vec![Vec::new(); m];
    let mut prod_abs: Vec<Vec<f64>> = vec![Vec::new(); m];
    let mut ratio_a = C64::new(1.0, 0.0);
    let mut sum = C64::new(0.0, 0.0);
    let mut prev_shell = f64::INFINITY;
    let mut prev_q = f64::INFINITY;
    for n in 0..=MAX_DEGREE {
        if n > 0 {
            let k = (n - 1) as f64;
            for i in 0..m {
                let last = g[i][n - 1];
                g[i].push(last * (b[i] + k) * x[i] / (k + 1.0));
            }
            ratio_a *= (a + k) / (c + k);
        }
        for i in 0..m {
            let (v, w) = if i == 0 {
                (g[0][n], g[0][n].norm())
            } else {
                let mut v = C64::new(0.0, 0.0);
                let mut w = 0.0;
                for j in 0..=n {
                    v += prod[i - 1][j] * g[i][n - j];
                    w += prod_abs[i - 1][j] * g[i][n - j].norm();
                }
                (v, w)
            };
            prod[i].push(v);
            prod_abs[i].push(w);
        }
        let shell = ratio_a * prod[m - 1][n];
        let shell_abs = ratio_a.norm() * prod_abs[m - 1][n];
        sum += shell;
        if n >= 4 && prev_shell > 0.0 {
            let q = shell_abs / prev_shell;
            // the shell ratio tends to max |x_i|; below that limit it may still be climbing
            let qe = q.max(rho);
            let tail = if qe < 1.0 { shell_abs * qe / (1.0 - qe) } else { f64::INFINITY };
            if (q <= rho * (1.0 + 1e-9) || q <= prev_q * (1.0 + 1e-9)) && tail < tol {
                return Ok(SeriesValue { value: sum, degree: n, tail_bound: tail.min(f64::MAX) });
            }
            prev_q = q;
        }
        if shell_abs == 0.0 && n >= 1 && prev_shell == 0.0 {
            return Ok(SeriesValue { value: sum, degree: n, tail_bound: 0.0 });
        }
        prev_shell = shell_abs;
    }
    Err(Error::Numerical(format!("F_D series did not reach tolerance {tol:e} by degree {MAX_DEGREE}")))
}

#[derive(Clone, Debug, Serialize)]
pub struct EulerReport {
    /// int_0^1 s^{a-1} (1-s)^{c-a-1} prod (1 - x_i s)^{-b_i} ds
    pub integral: C64,
    /// Gamma(c) / (Gamma(a) Gamma(c - a))
    pub normalization: C64,
    pub normalized: C64,
    pub series: C64,
    pub residual: f64,
    pub quadrature_error: f64,
}

/// Integral of u phi_0 over (1, infinity), written in s = 1/t as a Beta-type integral
/// over (0, 1). Both endpoints get geometrically graded panels down to `EDGE`; the
/// remaining slivers are integrated from the first two terms of the local expansion.
pub fn euler_integral(a: C64, b: &[C64], c: C64, x: &[C64], tol: f64) -> Result<(C64, f64)> {
    if b.len() != x.len() || b.is_empty() {
        return malformed("b and x must have the same positive length");
    }
    if !(a.re > 0.0 && (c - a).re > 0.0) {
        return domain("the integral needs 0 < Re a < Re c");
    }
    check_disc(x)?;
    const EDGE: f64 = 1e-9;
    let e0 = a - 1.0;
    let e1 = c - a - 1.0;
    let g = |s: f64| -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for (bi, xi) in b.iter().zip(x) {
            acc -= bi * (1.0 - xi * s).ln();
        }
        acc.exp()
    };
    // d/ds log g = sum b_i x_i / (1 - x_i s)
    let dlog_g = |s: f64| -> C64 { b.iter().zip(x).map(|(bi, xi)| bi * xi / (1.0 - xi * s)).sum() };
    let f = |s: f64| -> C64 { (e0 * s.ln()).exp() * (e1 * (1.0 - s).ln()).exp() * g(s) };

    let mut breaks = vec![EDGE];
    let mut p = EDGE;
    while p < 0.25 {
        p *= 2.0;
        breaks.push(p.min(0.5));
    }
    if *breaks.last().unwrap() < 0.5 {
        breaks.push(0.5);
    }
    let mut right: Vec<f64> = breaks.iter().rev().skip(1).map(|q| 1.0 - q).collect();
    breaks.append(&mut right);
    let share = tol / breaks.len() as f64;
    let mut value = C64::new(0.0, 0.0);
    let mut err = 0.0;
    for w in breaks.windows(2) {
        let r = integrate(&f, w[0], w[1], share, DEFAULT_PANEL_CAP)?;
        value += r.value;
        err += r.error_estimate;
    }
    // near 0: s^{a-1} h(s), h = (1-s)^{c-a-1} g, h(0) = 1, h'(0) = -(c-a-1) + g'(0)
    let h1 = -e1 + dlog_g(0.0);
    value += (a * EDGE.ln()).exp() / a + h1 * ((a + 1.0) * EDGE.ln()).exp() / (a + 1.0);
    // near 1: (1-s)^{c-a-1} k(s), k = s^{a-1} g, expanded in r = 1 - s
    let ca = c - a;
    let k1 = g(1.0);
    let dk1 = k1 * (e0 + dlog_g(1.0));
    value += k1 * (ca * EDGE.ln()).exp() / ca - dk1 * ((ca + 1.0) * EDGE.ln()).exp() / (ca + 1.0);
    Ok((value, err))
}

pub fn euler_check(a: C64, b: &[C64], c: C64, x: &[C64], tol: f64) -> Result<EulerReport> {
    let (integral, quadrature_error) = euler_integral(a, b, c, x, tol)?;
    let normalization = gamma(c) * rgamma(a) * rgamma(c - a);
    let series = fd_series(a, b, c, x, tol)?.value;
    let normalized = normalization * integral;
    Ok(EulerReport {
        integral,
        normalization,
        normalized,
        series,
        residual: (normalized - series).norm(),
        quadrature_error,
    })
}
