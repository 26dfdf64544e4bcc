//! Twisted periods by branch-tracked quadrature and the relation H = Psi C^-1 Phi.
//!
//!     cargo run --release --example period_relation

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use twisted_fd::numerics::verify_tpr;
use twisted_fd::parameters::{aligned_configuration, default_spacing, sample_parameters, ParameterVector, PointConfiguration, Stratum};

fn main() {
    let pv = ParameterVector::integers(&[0, 0, 0, 1, -1]).unwrap();
    let x = PointConfiguration::real(&[0.3, 0.6]).unwrap();
    let rep = verify_tpr(&pv, &x, 1e-12).unwrap();
    println!("u = t - 1 at x = (0.3, 0.6): residual {:.2e}, {} panels", rep.residual, rep.panels);
    for row in &rep.phi {
        println!("  Phi row {:?}", row.iter().map(|z| format!("{:.6}{:+.6}i", z.re, z.im)).collect::<Vec<_>>());
    }

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for m in 1..=3 {
        for st in Stratum::ALL {
            let pv = sample_parameters(m, st, &mut rng);
            let x = aligned_configuration(&pv.classify(), default_spacing(m)).unwrap();
            let rep = verify_tpr(&pv, &x, 1e-12).unwrap();
            println!(
                "m = {m} {st:?}: residual {:.2e}, rank H {}, rank C {}, quadrature error {:.1e}",
                rep.residual, rep.rank_h, rep.rank_c, rep.quadrature_error
            );
        }
    }
}
