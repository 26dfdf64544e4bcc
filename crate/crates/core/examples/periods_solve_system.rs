//! The periods of the standard frame against the cycle basis are solutions of the
//! system: the annihilating operators kill them and their Wronskian obeys its
//! first-order equation.
//!
//!     cargo run --release --example periods_solve_system

use twisted_fd::numerics::{annihilator_residuals, wronskian};
use twisted_fd::parameters::{aligned_configuration, default_spacing, ParameterVector, Scalar};

fn main() {
    let pv = ParameterVector::from_alpha(vec![
        Scalar::ratio(1, 2),
        Scalar::ratio(1, 3),
        Scalar::ratio(1, 4),
        Scalar::ratio(1, 5),
        Scalar::ratio(-77, 60),
    ])
    .unwrap();
    let x = aligned_configuration(&pv.classify(), default_spacing(2)).unwrap();
    let w = wronskian(&pv, &x, 1e-12).unwrap();
    println!("Wronskian {:.6e}, derivative residual {:.1e}", w.determinant, w.derivative_residual);
    let a = annihilator_residuals(&pv, &x, 1e-3, 1e-12).unwrap();
    println!("annihilators: relative residual {:.1e} (step {})", a.residual, a.step);
}
