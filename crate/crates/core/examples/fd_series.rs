//! F_D by its power series inside the unit polydisc, checked against the normalized
//! Euler integral.
//!
//!     cargo run --example fd_series

use twisted_fd::linalg::c;
use twisted_fd::numerics::{euler_check, fd_series};

fn main() {
    let r = |v: f64| c(v, 0.0);
    let (a, b, cc, x) = (r(0.3), [r(0.2), r(0.5)], r(1.7), [r(0.1), r(0.2)]);
    let s = fd_series(a, &b, cc, &x, 1e-15).unwrap();
    println!("F_D = {:.16}, degree {}, tail bound {:.1e}", s.value.re, s.degree, s.tail_bound);
    let rep = euler_check(a, &b, cc, &x, 1e-13).unwrap();
    println!("Euler integral, normalized = {:.16}, |diff| = {:.1e}", rep.normalized.re, rep.residual);

    let x = [c(0.3, 0.4), c(-0.5, 0.1), c(0.2, -0.6)];
    let b = [r(0.7), r(-0.4), r(1.3)];
    let rep = euler_check(r(0.6), &b, r(1.9), &x, 1e-13).unwrap();
    println!("complex x, m = 3: series {:.12}, integral {:.12}, |diff| {:.1e}", rep.series, rep.normalized, rep.residual);
}
