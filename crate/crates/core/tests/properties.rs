use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use twisted_fd::chains::{bases, intersection_matrix_h, pairing_matrix};
use twisted_fd::connection::{check_integrability, eigen_report, PfaffianKind, PfaffianSystem};
use twisted_fd::linalg::{c, identity, max_abs, max_abs_diff, C64};
use twisted_fd::monodromy::all_circuit_matrices;
use twisted_fd::numerics::fd_series;
use twisted_fd::numerics::gamma::gamma;
use twisted_fd::parameters::{sample_parameters, ParameterVector, Scalar, Stratum};

fn stratum() -> impl Strategy<Value = Stratum> {
    prop_oneof![Just(Stratum::Generic), Just(Stratum::PartiallyIntegral), Just(Stratum::FullyIntegral)]
}

fn draw(seed: u64, m: usize, st: Stratum) -> ParameterVector {
    sample_parameters(m, st, &mut ChaCha8Rng::seed_from_u64(seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exponents_sum_to_zero(a in -3.0..3.0f64, b in prop::collection::vec(-3.0..3.0f64, 1..5), cc in -3.0..3.0f64) {
        let pv = ParameterVector::from_abc(Scalar::real(a), b.iter().map(|&v| Scalar::real(v)).collect(), Scalar::real(cc)).unwrap();
        let s: C64 = pv.alpha().iter().sum();
        prop_assert!(s.norm() < 1e-12);
        let (a2, b2, c2) = pv.abc();
        prop_assert!((a2 - c(a, 0.0)).norm() < 1e-12 && (c2 - c(cc, 0.0)).norm() < 1e-12);
        for (x, y) in b2.iter().zip(&b) {
            prop_assert!((x - c(*y, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn rationals_round_trip(p in -1000i64..1000, q in 1i64..1000) {
        let s = Scalar::ratio(p, q);
        prop_assert_eq!(Scalar::parse_exact(&s.to_string()).unwrap(), s);
    }

    #[test]
    fn closed_form_h_is_the_bilinear_pairing(seed in any::<u64>(), m in 1usize..=5, st in stratum()) {
        let pv = draw(seed, m, st);
        let cls = pv.classify();
        let lam = pv.lambdas();
        let b = bases(&cls, &lam).unwrap();
        let h = intersection_matrix_h(&cls, &lam).unwrap();
        prop_assert!(max_abs_diff(&h, &pairing_matrix(&cls, &lam, &b.delta, &b.gamma).unwrap()) < 1e-12);
    }

    #[test]
    fn circuit_determinants_and_reflections(seed in any::<u64>(), m in 1usize..=4, st in stratum()) {
        let pv = draw(seed, m, st);
        for cm in all_circuit_matrices(&pv).unwrap() {
            prop_assert!((cm.det - cm.expected_det).norm() < 1e-10, "({}, {})", cm.p, cm.q);
            let l = cm.expected_det;
            if (c(1.0, 0.0) - l).norm() > 1e-6 {
                let e = identity(m + 1);
                let prod = (&cm.m - &e) * (&cm.m - &e * l);
                prop_assert!(max_abs(&prod) < 1e-9, "({}, {}) {:.2e}", cm.p, cm.q, max_abs(&prod));
            }
        }
    }

    #[test]
    fn residue_matrix_spectra(seed in any::<u64>(), m in 1usize..=4, st in stratum()) {
        for e in eigen_report(&draw(seed, m, st)) {
            prop_assert!(e.charpoly_residual < 1e-10, "{:?}", e);
            prop_assert!(e.rank <= 1);
        }
    }

    #[test]
    fn series_with_zero_b_is_one(a in -2.0..2.0f64, cc in 0.1..3.0f64, x in prop::collection::vec(-0.9..0.9f64, 1..4)) {
        let b = vec![c(0.0, 0.0); x.len()];
        let xs: Vec<C64> = x.iter().map(|&v| c(v, 0.0)).collect();
        let v = fd_series(c(a, 0.0), &b, c(cc, 0.0), &xs, 1e-14).unwrap();
        prop_assert!((v.value - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn series_is_symmetric_in_the_variables(a in -1.0..1.0f64, cc in 0.5..2.0f64, b1 in -1.0..1.0f64, b2 in -1.0..1.0f64, x1 in -0.5..0.5f64, x2 in -0.5..0.5f64) {
        let r = |v: f64| c(v, 0.0);
        let s = fd_series(r(a), &[r(b1), r(b2)], r(cc), &[r(x1), r(x2)], 1e-15).unwrap().value;
        let t = fd_series(r(a), &[r(b2), r(b1)], r(cc), &[r(x2), r(x1)], 1e-15).unwrap().value;
        prop_assert!((s - t).norm() < 1e-13);
    }

    #[test]
    fn gamma_reflection(re in -3.0..3.0f64, im in -2.0..2.0f64) {
        prop_assume!((re - re.round()).abs() > 1e-3 || im.abs() > 1e-3);
        let z = c(re, im);
        let lhs = gamma(z) * gamma(c(1.0, 0.0) - z);
        let rhs = c(std::f64::consts::PI, 0.0) / (z * std::f64::consts::PI).sin();
        prop_assert!((lhs - rhs).norm() <= 1e-11 * rhs.norm().max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn pfaffian_systems_are_flat(seed in any::<u64>(), m in 2usize..=4, st in stratum()) {
        let pv = draw(seed, m, st);
        for kind in [PfaffianKind::R, PfaffianKind::Xi, PfaffianKind::Theta] {
            let rep = check_integrability(&PfaffianSystem::new(&pv, kind), 3, seed).unwrap();
            prop_assert!(rep.flatness_residual < 1e-10, "{:?} {:?}", kind, rep);
        }
    }
}
