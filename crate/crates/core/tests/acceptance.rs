//! Acceptance gate. Each criterion prints one PASS/FAIL line (written straight to the
//! stderr handle so it survives output capture) and then asserts.

use std::io::Write;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use twisted_fd::chains::{bases, generator_pairs, intersection_matrix_h, pairing_matrix, vanishing_pair_coords, TwistedChain};
use twisted_fd::cocycles::{cohomology_matrix, nabla, standard_frames, RationalFunction, RationalOneForm};
use twisted_fd::connection::{check_integrability, eigen_report, invariant_subspaces, PfaffianKind, PfaffianSystem};
use twisted_fd::linalg::{c, from_rows, identity, inverse, max_abs, max_abs_diff, rank, CMat, C64, TWO_PI_I};
use twisted_fd::monodromy::{all_circuit_matrices, classify_representation};
use twisted_fd::numerics::{euler_check, period_matrices_for, verify_monodromy, verify_tpr, PeriodSetup};
use twisted_fd::parameters::{
    aligned_configuration, default_spacing, sample_parameters, ParameterVector, PointConfiguration, Scalar, Stratum,
};

const TOL_H_CLOSED_FORM: f64 = 1e-12;
const TOL_TABLES: f64 = 1e-12;
const TOL_WORKED_PERIODS: f64 = 1e-8;
const TOL_WORKED_C: f64 = 1e-10;
const TOL_TPR: f64 = 1e-6;
const TOL_EULER: f64 = 1e-8;
const TOL_EIGEN: f64 = 1e-10;
const TOL_INTEGRABILITY: f64 = 1e-10;
const TOL_INVARIANT: f64 = 1e-12;
const TOL_ODE: f64 = 1e-6;
const TOL_DET: f64 = 1e-10;
const TOL_TRIVIAL: f64 = 1e-6;
const RANK_RTOL: f64 = 1e-10;

const QUAD_TOL: f64 = 1e-12;

fn report(n: u32, name: &str, pass: bool, elapsed: Duration, detail: &str) {
    let tag = if pass { "PASS" } else { "FAIL" };
    let line = format!("[{tag}] criterion {n}: {name} ({:.2}s) {detail}\n", elapsed.as_secs_f64());
    let _ = std::io::stderr().write_all(line.as_bytes());
}

fn r(v: f64) -> C64 {
    c(v, 0.0)
}

fn aligned(pv: &ParameterVector) -> PointConfiguration {
    aligned_configuration(&pv.classify(), default_spacing(pv.m)).expect("sampled parameters are realizable")
}

#[test]
fn criterion_1_intersection_closed_form() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for st in Stratum::ALL {
        for k in 0..100 {
            let m = 1 + k % 5;
            let pv = sample_parameters(m, st, &mut rng);
            let cls = pv.classify();
            let lam = pv.lambdas();
            let h = intersection_matrix_h(&cls, &lam).unwrap();
            let b = bases(&cls, &lam).unwrap();
            let bilinear = pairing_matrix(&cls, &lam, &b.delta, &b.gamma).unwrap();
            worst = worst.max(max_abs_diff(&h, &bilinear));
            count += 1;
        }
    }
    let el = t.elapsed();
    let pass = worst <= TOL_H_CLOSED_FORM && el < Duration::from_secs(10);
    report(1, "closed-form H vs bilinear I_h", pass, el, &format!("{count} draws, max dev {worst:.2e}"));
    assert!(pass);
}

type Row = (usize, usize, Vec<C64>, Vec<C64>, CMat);

fn e_col(n: usize, k: usize) -> Vec<C64> {
    (0..n).map(|i| if i == k { r(1.0) } else { r(0.0) }).collect()
}

fn with_rows(rows: &[(usize, [C64; 4])]) -> CMat {
    let mut m = identity(4);
    for (i, v) in rows {
        for j in 0..4 {
            m[(*i, j)] = v[j];
        }
    }
    m
}

/// alpha_0, alpha_5 non-integral, alpha_1, alpha_2 in N_0, alpha_3, alpha_4 in -N.
fn first_table(l0: C64) -> Vec<Row> {
    let (o, z) = (r(1.0), r(0.0));
    vec![
        (0, 1, e_col(4, 0), vec![o - l0, z, z, z], with_rows(&[(0, [l0, z, z, z])])),
        (0, 2, e_col(4, 1), vec![z, o - l0, z, z], with_rows(&[(1, [z, l0, z, z])])),
        (0, 3, e_col(4, 2), vec![o, o, o - l0, z], with_rows(&[(2, [-o, -o, l0, z])])),
        (1, 2, vec![-o, o, z, z], vec![z, z, z, z], identity(4)),
        (1, 3, e_col(4, 2), vec![-o, z, z, z], with_rows(&[(2, [o, z, o, z])])),
        (1, 4, e_col(4, 3), vec![-o, z, z, z], with_rows(&[(3, [o, z, z, o])])),
        (2, 3, e_col(4, 2), vec![z, -o, z, z], with_rows(&[(2, [z, o, o, z])])),
        (2, 4, e_col(4, 3), vec![z, -o, z, z], with_rows(&[(3, [z, o, z, o])])),
        (3, 4, vec![z, z, z, z], vec![z, z, -o, o], identity(4)),
    ]
}

/// alpha_1 in N_0, alpha_2 in -N, the rest non-integral.
fn second_table(l0: C64, l3: C64, l4: C64) -> Vec<Row> {
    let (o, z) = (r(1.0), r(0.0));
    let d3 = o / (o - l3);
    let d4 = o / (o - l4);
    vec![
        (0, 1, e_col(4, 0), vec![o - l0, z, z, z], with_rows(&[(0, [l0, z, z, z])])),
        (
            0,
            2,
            e_col(4, 1),
            vec![o, o - l0, -o, -o / l3],
            with_rows(&[(1, [-o, l0, l0 * (l3 - o), l0 * (l4 - o)])]),
        ),
        (
            0,
            3,
            vec![z, z, d3, z],
            vec![o - l3, z, l0 * l3 - o, o - o / l3],
            with_rows(&[(2, [-o, z, l0 * l3, l0 * (l4 - o)])]),
        ),
        (1, 2, e_col(4, 1), vec![-o, z, z, z], with_rows(&[(1, [o, o, z, z])])),
        (1, 3, vec![-o, z, d3, z], vec![-(o - l3), z, z, z], with_rows(&[(0, [l3, z, z, z]), (2, [o, z, o, z])])),
        (1, 4, vec![-o, z, z, d4], vec![-(o - l4), z, z, z], with_rows(&[(0, [l4, z, z, z]), (3, [o, z, z, o])])),
        (2, 3, vec![z, -o, z, z], vec![z, -(o - l3), -l3, z], with_rows(&[(1, [z, l3, o - l3, z])])),
        (
            2,
            4,
            vec![z, -o, z, z],
            vec![z, -(o - l4), z, -l4],
            with_rows(&[(1, [z, l4, (o - l3) * (o - l4), o - l4])]),
        ),
        (
            3,
            4,
            vec![z, z, -d3, d4],
            vec![z, z, l3 * (o - l4), -l4 * (o - l3)],
            with_rows(&[(2, [z, z, l3 * l4 - l3 + o, o - l4]), (3, [z, z, (o - l3) * l3, l3])]),
        ),
    ]
}

fn second_table_h(l3: C64, l4: C64) -> CMat {
    let (o, z) = (r(1.0), r(0.0));
    from_rows(&[
        vec![o, z, z, z],
        vec![z, o, l3 - o, l4 - o],
        vec![z, z, l3 - o, (o - o / l3) * (l4 - o)],
        vec![z, z, z, l4 - o],
    ])
}

/// A float in (0.05, 0.95) whose fractional combinations stay away from integers.
fn frac(rng: &mut ChaCha8Rng) -> f64 {
    rng.random_range(0.05..0.95)
}

fn away_from_integers(v: &[f64]) -> bool {
    v.iter().all(|x| (x - x.round()).abs() > 0.05)
}

/// Max deviation of (y, z, M) from the table rows, over the generator pairs.
fn table_deviation(pv: &ParameterVector, rows: &[Row]) -> f64 {
    let cls = pv.classify();
    let lam = pv.lambdas();
    let h = intersection_matrix_h(&cls, &lam).unwrap();
    let ms = all_circuit_matrices(pv).unwrap();
    assert_eq!(ms.len(), rows.len());
    let mut worst: f64 = 0.0;
    for (p, q, y, z, m) in rows {
        let v = vanishing_pair_coords(&cls, &lam, &h, *p, *q).unwrap();
        let cm = ms.iter().find(|cm| cm.p == *p && cm.q == *q).unwrap();
        for k in 0..4 {
            worst = worst.max((v.y[(k, 0)] - y[k]).norm()).max((v.z[(0, k)] - z[k]).norm());
        }
        worst = worst.max(max_abs_diff(&cm.m, m));
    }
    worst
}

#[test]
fn criterion_2_circuit_tables() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut worst_a, mut worst_b): (f64, f64) = (0.0, 0.0);
    let mut samples = 0;
    while samples < 10 {
        let a0 = frac(&mut rng);
        let (n1, n2) = (rng.random_range(0..=2i64), rng.random_range(0..=2i64));
        let (m3, m4) = (rng.random_range(1..=2i64), rng.random_range(1..=2i64));
        let a5 = -(a0 + (n1 + n2 - m3 - m4) as f64);
        let pv = ParameterVector::from_alpha(vec![
            Scalar::real(a0),
            Scalar::int(n1),
            Scalar::int(n2),
            Scalar::int(-m3),
            Scalar::int(-m4),
            Scalar::real(a5),
        ])
        .unwrap();
        let l0 = pv.lambdas()[0];
        let h = intersection_matrix_h(&pv.classify(), &pv.lambdas()).unwrap();
        worst_a = worst_a.max(max_abs_diff(&h, &identity(4)));
        worst_a = worst_a.max(table_deviation(&pv, &first_table(l0)));

        let (b0, b3, b4) = (frac(&mut rng), frac(&mut rng), frac(&mut rng));
        let (k1, k2) = (rng.random_range(0..=2i64), rng.random_range(1..=2i64));
        let b5 = -(b0 + b3 + b4 + (k1 - k2) as f64);
        // non-degenerate: every lambda product entering the rows stays away from 1
        if !away_from_integers(&[b5, b0 + b3, b3 + b4, b0 + b3 + b4]) {
            continue;
        }
        let pv = ParameterVector::from_alpha(vec![
            Scalar::real(b0),
            Scalar::int(k1),
            Scalar::int(-k2),
            Scalar::real(b3),
            Scalar::real(b4),
            Scalar::real(b5),
        ])
        .unwrap();
        let lam = pv.lambdas();
        let h = intersection_matrix_h(&pv.classify(), &lam).unwrap();
        worst_b = worst_b.max(max_abs_diff(&h, &second_table_h(lam[3], lam[4])));
        worst_b = worst_b.max(table_deviation(&pv, &second_table(lam[0], lam[3], lam[4])));
        samples += 1;
    }
    let el = t.elapsed();
    let pass = worst_a <= TOL_TABLES && worst_b <= TOL_TABLES && el < Duration::from_secs(5);
    report(
        2,
        "circuit tables (y, z, M)",
        pass,
        el,
        &format!("10 lambda samples, 9+9 rows, max dev {worst_a:.2e} / {worst_b:.2e}"),
    );
    assert!(pass);
}

struct Worked {
    pv: ParameterVector,
    phis: Vec<RationalOneForm>,
    gammas: Vec<TwistedChain>,
    deltas: Vec<TwistedChain>,
    psis: Vec<RationalOneForm>,
    want_phi: CMat,
    want_psi: CMat,
    want_c: CMat,
}

fn pole(site: usize, order: u32, k: f64) -> RationalOneForm {
    RationalOneForm::pole(site, order, r(k))
}

fn shifted_powers(pv: &ParameterVector, pts: &[C64], s: f64) -> Vec<RationalOneForm> {
    let p1 = RationalFunction::polynomial(vec![r(-s), r(1.0)]);
    let p2 = RationalFunction::polynomial(vec![r(s * s), r(-2.0 * s), r(1.0)]);
    vec![nabla(&p1, pv, pts), nabla(&p2, pv, pts)]
}

fn worked_examples(x1: f64, x2: f64) -> Vec<Worked> {
    let pts = [r(0.0), r(x1), r(x2), r(1.0)];
    let (l1, l2) = ((1.0 - x1).ln(), (1.0 - x2).ln());

    // all exponents zero
    let pv = ParameterVector::integers(&[0, 0, 0, 0, 0]).unwrap();
    let mut phis = vec![pole(3, 1, 1.0)];
    phis.extend(shifted_powers(&pv, &pts, 0.0));
    let one = Worked {
        phis,
        gammas: vec![
            TwistedChain::loop_at(3, false),
            TwistedChain::path(1, false).minus(&TwistedChain::path(0, false)),
            TwistedChain::path(2, false).minus(&TwistedChain::path(0, false)),
        ],
        deltas: vec![
            TwistedChain::path(4, true).minus(&TwistedChain::path(3, true)),
            TwistedChain::loop_at(1, true),
            TwistedChain::loop_at(2, true),
        ],
        psis: vec![
            pole(0, 2, 1.0),
            pole(1, 1, 1.0 / x1).plus(&pole(0, 1, -1.0 / x1)),
            pole(2, 1, 1.0 / x2).plus(&pole(0, 1, -1.0 / x2)),
        ],
        want_phi: from_rows(&[
            vec![TWO_PI_I, r(l1), r(l2)],
            vec![r(0.0), r(x1), r(x2)],
            vec![r(0.0), r(x1 * x1), r(x2 * x2)],
        ]),
        want_psi: from_rows(&[
            vec![r(1.0), r(-l1 / x1), r(-l2 / x2)],
            vec![r(0.0), TWO_PI_I / x1, r(0.0)],
            vec![r(0.0), r(0.0), TWO_PI_I / x2],
        ]),
        want_c: from_rows(&[vec![r(1.0), r(0.0), r(0.0)], vec![r(0.0), r(1.0), r(1.0)], vec![r(0.0), r(x1), r(x2)]])
            * (-TWO_PI_I),
        pv,
    };

    // u = t - 1
    let pv = ParameterVector::integers(&[0, 0, 0, 1, -1]).unwrap();
    let mut phis = vec![nabla(&RationalFunction::constant(r(1.0)), &pv, &pts)];
    phis.extend(shifted_powers(&pv, &pts, 1.0));
    let (y1, y2) = (x1 - 1.0, x2 - 1.0);
    let two = Worked {
        phis,
        gammas: (0..3).map(|k| TwistedChain::path(k, false).minus(&TwistedChain::path(3, false))).collect(),
        deltas: (0..3).map(|k| TwistedChain::loop_at(k, true)).collect(),
        psis: vec![pole(0, 1, 1.0), pole(1, 1, 1.0), pole(2, 1, 1.0)],
        want_phi: from_rows(&[
            vec![r(-1.0), r(y1), r(y2)],
            vec![r(1.0), r(y1 * y1), r(y2 * y2)],
            vec![r(-1.0), r(y1.powi(3)), r(y2.powi(3))],
        ]),
        want_psi: from_rows(&[
            vec![-TWO_PI_I, r(0.0), r(0.0)],
            vec![r(0.0), TWO_PI_I / y1, r(0.0)],
            vec![r(0.0), r(0.0), TWO_PI_I / y2],
        ]),
        want_c: from_rows(&[
            vec![r(1.0), r(1.0), r(1.0)],
            vec![r(-1.0), r(y1), r(y2)],
            vec![r(1.0), r(y1 * y1), r(y2 * y2)],
        ]) * (-TWO_PI_I),
        pv,
    };
    vec![one, two]
}

#[test]
fn criterion_3_worked_examples() {
    let t = Instant::now();
    let x = PointConfiguration::real(&[0.3, 0.6]).unwrap();
    let mut pass = true;
    let mut details = Vec::new();
    for (k, w) in worked_examples(0.3, 0.6).iter().enumerate() {
        let setup = PeriodSetup::new(&w.pv, &x, QUAD_TOL).unwrap();
        let pm = period_matrices_for(&setup, &w.phis, &w.gammas, &w.deltas, &w.psis).unwrap();
        let h = pairing_matrix(&w.pv.classify(), &w.pv.lambdas(), &w.deltas, &w.gammas).unwrap();
        let cm = cohomology_matrix(&w.phis, &w.psis, &w.pv, &x).unwrap();
        let dphi = max_abs_diff(&pm.phi, &w.want_phi);
        let dpsi = max_abs_diff(&pm.psi, &w.want_psi);
        let dc = max_abs_diff(&cm, &w.want_c);
        let dh = max_abs_diff(&h, &(-identity(3)));
        let tpr = max_abs(&(&h - &pm.psi * inverse(&cm).unwrap() * &pm.phi));
        pass &= dphi <= TOL_WORKED_PERIODS && dpsi <= TOL_WORKED_PERIODS && dc <= TOL_WORKED_C && dh == 0.0 && tpr <= TOL_TPR;
        details.push(format!("ex{}: Phi {dphi:.1e} Psi {dpsi:.1e} C {dc:.1e} H {dh:.1e} TPR {tpr:.1e}", k + 1));
    }
    let el = t.elapsed();
    pass &= el < Duration::from_secs(30);
    report(3, "worked examples at x = (0.3, 0.6)", pass, el, &details.join("; "));
    assert!(pass);
}

#[test]
fn criterion_4_period_relation_at_scale() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for m in 1..=3 {
        for k in 0..30 {
            let st = Stratum::ALL[k % 3];
            let pv = sample_parameters(m, st, &mut rng);
            let rep = verify_tpr(&pv, &aligned(&pv), QUAD_TOL).unwrap_or_else(|e| panic!("{:?}: {e}", pv.entries));
            worst = worst.max(rep.residual);
            count += 1;
        }
    }
    let el = t.elapsed();
    let pass = worst <= TOL_TPR && el < Duration::from_secs(300);
    report(4, "H = Psi C^-1 Phi, m = 1..3, all strata", pass, el, &format!("{count} draws, max residual {worst:.2e}"));
    assert!(pass);
}

#[test]
fn criterion_5_euler_series() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut cases = vec![(r(0.3), vec![r(0.2), r(0.5)], r(1.7), vec![r(0.1), r(0.2)])];
    while cases.len() < 11 {
        let m = rng.random_range(1..=3usize);
        let a = rng.random_range(0.2..1.5);
        let cc = a + rng.random_range(0.2..1.5);
        let b: Vec<C64> = (0..m).map(|_| r(rng.random_range(-1.0..1.0))).collect();
        let x: Vec<C64> = (0..m)
            .map(|_| C64::from_polar(rng.random_range(0.05..0.6), rng.random_range(-3.0..3.0)))
            .collect();
        cases.push((r(a), b, r(cc), x));
    }
    let mut worst: f64 = 0.0;
    for (a, b, cc, x) in &cases {
        let rep = euler_check(*a, b, *cc, x, QUAD_TOL).unwrap();
        worst = worst.max(rep.residual);
    }
    let el = t.elapsed();
    let pass = worst <= TOL_EULER && el < Duration::from_secs(60);
    report(5, "Euler integral vs F_D series", pass, el, &format!("{} cases, max |diff| {worst:.2e}", cases.len()));
    assert!(pass);
}

#[test]
fn criterion_6_connection_properties() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut eig, mut flat, mut inv): (f64, f64, f64) = (0.0, 0.0, 0.0);
    let mut dims_ok = true;
    for m in 1..=4 {
        for st in Stratum::ALL {
            for k in 0..3 {
                let pv = sample_parameters(m, st, &mut rng);
                eig = eig.max(eigen_report(&pv).iter().map(|e| e.charpoly_residual).fold(0.0, f64::max));
                if k == 0 {
                    for kind in [PfaffianKind::R, PfaffianKind::Xi, PfaffianKind::Theta] {
                        let rep = check_integrability(&PfaffianSystem::new(&pv, kind), 20, 60 + m as u64).unwrap();
                        flat = flat.max(rep.flatness_residual).max(rep.commutator_residual);
                    }
                }
                if st != Stratum::Generic {
                    let rep = invariant_subspaces(&pv, &aligned(&pv).x).unwrap();
                    inv = inv.max(rep.max_residual);
                    dims_ok &= rep.exact_span_dimension == rep.expected_exact_span_dimension;
                    dims_ok &= rep.polar_hyperplanes.iter().all(|h| h.dimension == h.expected_dimension);
                }
            }
        }
    }
    let el = t.elapsed();
    let pass = eig <= TOL_EIGEN && flat <= TOL_INTEGRABILITY && inv <= TOL_INVARIANT && dims_ok;
    report(
        6,
        "eigenvalues, integrability, invariant subspaces",
        pass,
        el,
        &format!("eig {eig:.2e}, integrability {flat:.2e}, invariance {inv:.2e}, dims ok {dims_ok}"),
    );
    assert!(pass);
}

#[test]
fn criterion_7_monodromy_consistency() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut ode, mut det, mut triv_m, mut triv_n): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
    let mut loops = 0;
    for m in 2..=3 {
        let pairs = generator_pairs(m);
        for st in Stratum::ALL {
            for _ in 0..2 {
                let pv = sample_parameters(m, st, &mut rng);
                let rep = verify_monodromy(&pv, &aligned(&pv), PfaffianKind::Xi, &pairs, QUAD_TOL)
                    .unwrap_or_else(|e| panic!("{:?}: {e}", pv.entries));
                ode = ode.max(rep.max_residual);
                det = det.max(rep.max_det_residual);
                loops += rep.checks.len();
            }
        }
        // trivial strata: integral exponents with one or m+2 sites in D
        let mut found = 0;
        while found < 2 {
            let pv = sample_parameters(m, Stratum::FullyIntegral, &mut rng);
            if !classify_representation(&pv).unwrap().trivial {
                continue;
            }
            for cm in all_circuit_matrices(&pv).unwrap() {
                triv_m = triv_m.max(max_abs_diff(&cm.m, &identity(m + 1)));
            }
            let rep = verify_monodromy(&pv, &aligned(&pv), PfaffianKind::Xi, &pairs, QUAD_TOL).unwrap();
            triv_n = triv_n.max(rep.max_identity_deviation);
            loops += rep.checks.len();
            found += 1;
        }
    }
    let el = t.elapsed();
    let pass = ode <= TOL_ODE && det <= TOL_DET && triv_m <= TOL_TRIVIAL && triv_n <= TOL_TRIVIAL && el < Duration::from_secs(600);
    report(
        7,
        "ODE continuation vs circuit matrices",
        pass,
        el,
        &format!("{loops} loops, N vs FMF^-1 {ode:.2e}, det {det:.2e}, trivial M {triv_m:.2e} N {triv_n:.2e}"),
    );
    assert!(pass);
}

#[test]
fn criterion_8_dimensions() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut bad = Vec::new();
    let mut count = 0;
    for m in 1..=5 {
        for st in Stratum::ALL {
            for _ in 0..10 {
                let pv = sample_parameters(m, st, &mut rng);
                let x = aligned(&pv);
                let h = intersection_matrix_h(&pv.classify(), &pv.lambdas()).unwrap();
                let (phis, psis) = standard_frames(&pv, &x).unwrap();
                let cm = cohomology_matrix(&phis, &psis, &pv, &x).unwrap();
                let (rh, rc) = (rank(&h, RANK_RTOL), rank(&cm, RANK_RTOL));
                if rh != m + 1 || rc != m + 1 {
                    bad.push(format!("{:?}: rank H {rh}, rank C {rc}", pv.entries));
                }
                count += 1;
            }
        }
    }
    let el = t.elapsed();
    let pass = bad.is_empty();
    report(8, "rank H = rank C = m+1", pass, el, &format!("{count} draws, {} failures {bad:?}", bad.len()));
    assert!(pass);
}
