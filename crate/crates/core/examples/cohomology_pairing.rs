//! Frames of the twisted cohomology groups and their intersection matrix C, computed
//! by the residue algorithm.
//!
//!     cargo run --example cohomology_pairing

use twisted_fd::cocycles::{cohomology_matrix, standard_frames};
use twisted_fd::linalg::{rank, TWO_PI_I};
use twisted_fd::parameters::{ParameterVector, PointConfiguration};

fn main() {
    let x = PointConfiguration::real(&[0.3, 0.6]).unwrap();
    for alpha in [[0, 0, 0, 0, 0], [0, 0, 0, 1, -1], [2, 0, -1, 0, -1]] {
        let pv = ParameterVector::integers(&alpha).unwrap();
        let (phis, psis) = standard_frames(&pv, &x).unwrap();
        let c = cohomology_matrix(&phis, &psis, &pv, &x).unwrap();
        println!("alpha = {alpha:?}, rank C = {}", rank(&c, 1e-10));
        println!("C / (2 pi i) = {:.6}", c.map(|z| z / TWO_PI_I));
    }
    let pv = ParameterVector::floats(&[0.31, -0.22, 0.47, 0.13, -0.69]).unwrap();
    let (phis, psis) = standard_frames(&pv, &x).unwrap();
    let c = cohomology_matrix(&phis, &psis, &pv, &x).unwrap();
    println!("generic alpha: C / (2 pi i) = {:.6}", c.map(|z| z / TWO_PI_I));
}
