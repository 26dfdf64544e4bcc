//! Continues the Pfaffian system around every generator loop and compares the result
//! with the circuit matrices conjugated by the period matrix.
//!
//!     cargo run --release --example ode_monodromy

use twisted_fd::chains::generator_pairs;
use twisted_fd::connection::PfaffianKind;
use twisted_fd::numerics::verify_monodromy;
use twisted_fd::parameters::{aligned_configuration, default_spacing, ParameterVector};

fn main() {
    let pv = ParameterVector::floats(&[0.31, -0.22, 0.47, 0.13, -0.69]).unwrap();
    let x = aligned_configuration(&pv.classify(), default_spacing(2)).unwrap();
    for kind in [PfaffianKind::Xi, PfaffianKind::Theta] {
        let rep = verify_monodromy(&pv, &x, kind, &generator_pairs(2), 1e-12).unwrap();
        for g in &rep.checks {
            println!(
                "{kind:?} rho_({},{}): |N - F M F^-1| = {:.1e}, {} steps, closest approach {:.3}",
                g.p, g.q, g.residual, g.steps, g.closest_approach
            );
        }
    }

    // all finite sites in D: monodromy is trivial
    let pv = ParameterVector::integers(&[0, 0, 0, 1, -1]).unwrap();
    let x = aligned_configuration(&pv.classify(), default_spacing(2)).unwrap();
    let rep = verify_monodromy(&pv, &x, PfaffianKind::Xi, &generator_pairs(2), 1e-12).unwrap();
    println!("trivial stratum: max |N - E| = {:.1e}", rep.max_identity_deviation);
}
