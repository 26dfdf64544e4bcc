//! Standard twisted cycle bases and the intersection matrix H, from its closed block
//! form and from the bilinear pairing of the chains.
//!
//!     cargo run --example homology_bases

use twisted_fd::chains::{bases, intersection_matrix_h, pairing_matrix, TwistedChain};
use twisted_fd::linalg::{max_abs_diff, rank};
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
    let cls = pv.classify();
    let lam = pv.lambdas();
    let b = bases(&cls, &lam).unwrap();
    let show = |name: &str, chains: &[TwistedChain]| {
        for (k, ch) in chains.iter().enumerate() {
            println!("{name}_{} = {}", k + 1, twisted_fd::numerics::periods::describe_chain(ch));
        }
    };
    show("gamma", &b.gamma);
    show("delta", &b.delta);

    let h = intersection_matrix_h(&cls, &lam).unwrap();
    let bilinear = pairing_matrix(&cls, &lam, &b.delta, &b.gamma).unwrap();
    println!("H = {h:.6}");
    println!("closed form vs pairing: {:.2e}, rank {}", max_abs_diff(&h, &bilinear), rank(&h, 1e-10));
}
