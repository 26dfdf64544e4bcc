//! Residue matrices R_{i,j}, their spectra, the Pfaffian systems in three frames and
//! their integrability, and the invariant subspaces of an integral case.
//!
//!     cargo run --example pfaffian_connection

use twisted_fd::connection::{check_integrability, eigen_report, invariant_subspaces, residue_matrices, PfaffianKind, PfaffianSystem};
use twisted_fd::linalg::c;
use twisted_fd::parameters::{ParameterVector, Scalar};

fn main() {
    let pv = ParameterVector::from_alpha(vec![
        Scalar::ratio(1, 2),
        Scalar::ratio(1, 3),
        Scalar::ratio(1, 4),
        Scalar::ratio(1, 5),
        Scalar::ratio(-77, 60),
    ])
    .unwrap();
    for e in eigen_report(&pv) {
        println!(
            "R_{:?}: eigenvalue {:.4}, rank {}, char poly residual {:.1e}",
            e.pair, e.eigenvalue, e.rank, e.charpoly_residual
        );
    }
    println!("R_(1,2) = {:.5}", residue_matrices(&pv).get(1, 2).unwrap());

    let x = [c(0.2, 0.1), c(0.7, -0.3)];
    for kind in [PfaffianKind::R, PfaffianKind::Xi, PfaffianKind::Theta] {
        let sys = PfaffianSystem::new(&pv, kind);
        let w = sys.at(&x).unwrap();
        let rep = check_integrability(&sys, 20, 1).unwrap();
        println!("{kind:?}: dx_1 coefficient {:.4}", w[0]);
        println!("{kind:?}: flatness {:.1e}, residue commutators {:.1e}", rep.flatness_residual, rep.commutator_residual);
    }

    let pv = ParameterVector::integers(&[2, 0, -1, 0, -1]).unwrap();
    let rep = invariant_subspaces(&pv, &[c(0.3, 0.0), c(0.6, 0.0)]).unwrap();
    println!(
        "alpha = (2, 0, -1, 0, -1): exact span {} (expected {}), {} polar hyperplanes, residual {:.1e}",
        rep.exact_span_dimension,
        rep.expected_exact_span_dimension,
        rep.polar_hyperplanes.len(),
        rep.max_residual
    );
}
