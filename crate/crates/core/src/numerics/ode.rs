//! Continuation of a Pfaffian system dY = (sum_k W_k dx_k) Y along piecewise linear
//! paths in the configuration space, with an embedded Dormand-Prince 5(4) pair.

use serde::Serialize;

use crate::connection::PfaffianSystem;
use crate::error::{domain, malformed, Error, Result};
use crate::linalg::{c, identity, CMat, C64};

pub const RTOL: f64 = 1e-10;
pub const ATOL: f64 = 1e-12;

#[derive(Clone, Debug, Serialize)]
pub struct ContinuationResult {
    #[serde(skip)]
    pub y: CMat,
    pub steps: usize,
    pub rejected: usize,
    /// smallest distance between two of 0, x_1, .., x_m, 1 met along the path
    pub closest_approach: f64,
}

// Dormand-Prince coefficients
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// fifth-order minus embedded fourth-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn gap(x: &[C64]) -> f64 {
    let mut s = vec![c(0.0, 0.0)];
    s.extend_from_slice(x);
    s.push(c(1.0, 0.0));
    let mut g = f64::INFINITY;
    for i in 0..s.len() {
        for j in 0..i {
            g = g.min((s[i] - s[j]).norm());
        }
    }
    g
}

struct Segment<'a> {
    sys: &'a PfaffianSystem,
    from: &'a [C64],
    dir: Vec<C64>,
}

impl Segment<'_> {
    fn point(&self, tau: f64) -> Vec<C64> {
        self.from.iter().zip(&self.dir).map(|(a, d)| a + d * tau).collect()
    }

    fn rhs(&self, tau: f64, y: &CMat, closest: &mut f64) -> Result<CMat> {
        let x = self.point(tau);
        *closest = closest.min(gap(&x));
        let w = self.sys.at(&x)?;
        let n = y.nrows();
        let mut a = CMat::zeros(n, n);
        for (k, d) in self.dir.iter().enumerate() {
            if *d != c(0.0, 0.0) {
                a += &w[k] * *d;
            }
        }
        Ok(a * y)
    }
}

/// h * sum_i w_i k_i
fn comb(terms: &[(&CMat, f64)], h: f64) -> CMat {
    let mut out = CMat::zeros(terms[0].0.nrows(), terms[0].0.ncols());
    for (k, w) in terms {
        out += *k * c(w * h, 0.0);
    }
    out
}

fn error_norm(err: &CMat, y0: &CMat, y1: &CMat, rtol: f64, atol: f64) -> f64 {
    let mut e = 0.0f64;
    for i in 0..err.len() {
        let sc = atol + rtol * y0[i].norm().max(y1[i].norm());
        e = e.max(err[i].norm() / sc);
    }
    e
}

/// Solves along the polygon through `waypoints` and returns Y at the last waypoint.
pub fn continue_pfaffian(sys: &PfaffianSystem, waypoints: &[Vec<C64>], y0: &CMat, rtol: f64, atol: f64) -> Result<ContinuationResult> {
    if waypoints.is_empty() {
        return malformed("a path needs at least one waypoint");
    }
    let m = sys.m();
    if waypoints.iter().any(|w| w.len() != m) || y0.nrows() != m + 1 || y0.ncols() == 0 {
        return malformed(format!("waypoints must have {m} coordinates and Y0 {} rows", m + 1));
    }
    if !(rtol > 0.0 && atol > 0.0) {
        return malformed("tolerances must be positive");
    }
    let mut y = y0.clone();
    let mut steps = 0;
    let mut rejected = 0;
    let mut closest = gap(&waypoints[0]);
    for pair in waypoints.windows(2) {
        let seg = Segment { sys, from: &pair[0], dir: pair[1].iter().zip(&pair[0]).map(|(b, a)| b - a).collect() };
        if seg.dir.iter().all(|d| *d == c(0.0, 0.0)) {
            continue;
        }
        let mut tau = 0.0;
        let mut h = 0.05;
        let mut k1 = seg.rhs(0.0, &y, &mut closest)?;
        while tau < 1.0 {
            if tau + h > 1.0 {
                h = 1.0 - tau;
            }
            let k2 = seg.rhs(tau + C2 * h, &(&y + comb(&[(&k1, A21)], h)), &mut closest)?;
            let k3 = seg.rhs(tau + C3 * h, &(&y + comb(&[(&k1, A31), (&k2, A32)], h)), &mut closest)?;
            let k4 = seg.rhs(tau + C4 * h, &(&y + comb(&[(&k1, A41), (&k2, A42), (&k3, A43)], h)), &mut closest)?;
            let k5 = seg.rhs(
                tau + C5 * h,
                &(&y + comb(&[(&k1, A51), (&k2, A52), (&k3, A53), (&k4, A54)], h)),
                &mut closest,
            )?;
            let k6 = seg.rhs(
                tau + h,
                &(&y + comb(&[(&k1, A61), (&k2, A62), (&k3, A63), (&k4, A64), (&k5, A65)], h)),
                &mut closest,
            )?;
            let y1 = &y + comb(&[(&k1, B1), (&k3, B3), (&k4, B4), (&k5, B5), (&k6, B6)], h);
            let k7 = seg.rhs(tau + h, &y1, &mut closest)?;
            let err = comb(&[(&k1, E1), (&k3, E3), (&k4, E4), (&k5, E5), (&k6, E6), (&k7, E7)], h);
            let e = error_norm(&err, &y, &y1, rtol, atol);
            if e <= 1.0 {
                tau += h;
                y = y1;
                k1 = k7;
                steps += 1;
            } else {
                rejected += 1;
            }
            let fac = if e == 0.0 { 5.0 } else { (0.9 * e.powf(-0.2)).clamp(0.2, 5.0) };
            h *= fac;
            if h < 1e-14 {
                return Err(Error::Numerical(format!(
                    "step size underflow; closest approach to the singular locus {closest:.3e}"
                )));
            }
        }
    }
    Ok(ContinuationResult { y, steps, rejected, closest_approach: closest })
}

/// Continuation matrix N = Y(end) Y(start)^{-1} of a closed path.
pub fn continuation_matrix(sys: &PfaffianSystem, waypoints: &[Vec<C64>], rtol: f64, atol: f64) -> Result<ContinuationResult> {
    let n = sys.m() + 1;
    continue_pfaffian(sys, waypoints, &identity(n), rtol, atol)
}

/// The loop rho_{p,q} from the base point: x_p (or x_q when p = 0) rises into the upper
/// half plane, travels above the target site (x_q, or 0 when p = 0), descends to height
/// `radius`, turns once counterclockwise around it on a 64-gon and retraces its way back.
pub fn generator_loop(base: &[C64], p: usize, q: usize) -> Result<Vec<Vec<C64>>> {
    let m = base.len();
    if p >= q || q > m + 1 || (p == 0 && q == m + 1) {
        return domain(format!("({p}, {q}) is not a generator pair"));
    }
    let site = |k: usize| -> C64 {
        if k == 0 {
            c(0.0, 0.0)
        } else if k == m + 1 {
            c(1.0, 0.0)
        } else {
            base[k - 1]
        }
    };
    let (mover, target) = if p >= 1 { (p, site(q)) } else { (q, site(0)) };
    let radius = 0.25 * gap(base);
    let height = 1.0f64.max(4.0 * radius);
    let start = base[mover - 1];
    let at = |z: C64| -> Vec<C64> {
        let mut v = base.to_vec();
        v[mover - 1] = z;
        v
    };
    let mut out = vec![at(start), at(start + c(0.0, height)), at(target + c(0.0, height))];
    let n = 64;
    for k in 0..=n {
        let th = std::f64::consts::FRAC_PI_2 + 2.0 * std::f64::consts::PI * k as f64 / n as f64;
        out.push(at(target + C64::from_polar(radius, th)));
    }
    out.push(at(target + c(0.0, height)));
    out.push(at(start + c(0.0, height)));
    out.push(at(start));
    Ok(out)
}
