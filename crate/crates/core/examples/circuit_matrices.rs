//! Circuit matrices M_{p,q} of the generator loops, and the reducibility and triviality
//! of the monodromy representation.
//!
//!     cargo run --example circuit_matrices

use twisted_fd::linalg::{identity, max_abs};
use twisted_fd::monodromy::{all_circuit_matrices, classify_representation};
use twisted_fd::parameters::{ParameterVector, Scalar};

fn main() {
    let pv = ParameterVector::from_alpha(vec![
        Scalar::ratio(1, 3),
        Scalar::int(1),
        Scalar::int(-2),
        Scalar::ratio(1, 2),
        Scalar::ratio(1, 5),
        Scalar::ratio(-1, 30),
    ])
    .unwrap();
    let ms = all_circuit_matrices(&pv).unwrap();
    for cm in &ms {
        let n = cm.m.nrows();
        let refl = (&cm.m - identity(n)) * (&cm.m - identity(n) * cm.expected_det);
        println!(
            "M_({},{}): |det - lambda_p lambda_q| = {:.1e}, reflection residual {:.1e}, degenerate {}",
            cm.p,
            cm.q,
            (cm.det - cm.expected_det).norm(),
            max_abs(&refl),
            cm.degenerate
        );
    }
    let m23 = ms.iter().find(|cm| (cm.p, cm.q) == (2, 3)).unwrap();
    println!("M_(2,3) = {:.4}", m23.m);

    for alpha in [[0, 0, 0, 0, 0], [0, 0, 0, 1, -1]] {
        let rep = classify_representation(&ParameterVector::integers(&alpha).unwrap()).unwrap();
        println!(
            "alpha = {alpha:?}: reducible {}, trivial {}, max |M - E| {:.1e}",
            rep.reducible, rep.trivial, rep.max_deviation_from_identity
        );
        for w in &rep.witnesses {
            println!("  invariant subspace ({}) of dim {}, residual {:.1e}", w.description, w.dimension, w.invariance_residual);
        }
    }
}
