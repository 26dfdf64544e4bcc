//! Verification suites: the twisted period relation, ODE monodromy against the
//! circuit matrices, the Wronskian of the period solutions and the annihilating operators.

use serde::Serialize;

use super::ode::{continuation_matrix, generator_loop, ATOL, RTOL};
use super::periods::{period_matrices_for, PeriodSetup};
use crate::chains::{bases, intersection_matrix_h};
use crate::cocycles::{cohomology_matrix, frames, standard_frames, RationalOneForm};
use crate::connection::{PfaffianKind, PfaffianSystem};
use crate::error::Result;
use crate::linalg::{c, identity, inverse, max_abs, rank, to_rows, CMat, C64};
use crate::monodromy::all_circuit_matrices;
use crate::parameters::{ParameterVector, PointConfiguration};

#[derive(Clone, Debug, Serialize)]
pub struct TprReport {
    /// max |H - Psi C^{-1} Phi|
    pub residual: f64,
    pub rank_h: usize,
    pub rank_c: usize,
    pub h: Vec<Vec<C64>>,
    pub c: Vec<Vec<C64>>,
    pub phi: Vec<Vec<C64>>,
    pub psi: Vec<Vec<C64>>,
    pub quadrature_error: f64,
    pub panels: usize,
}

pub fn tpr_residual(h: &CMat, c: &CMat, phi: &CMat, psi: &CMat) -> Result<f64> {
    Ok(max_abs(&(h - psi * inverse(c)? * phi)))
}

/// Checks H = Psi C^{-1} Phi with the closed-form H, residue-pairing C, and
/// quadrature periods of the standard frames against the standard bases.
pub fn verify_tpr(pv: &ParameterVector, x: &PointConfiguration, tol: f64) -> Result<TprReport> {
    let setup = PeriodSetup::new(pv, x, tol)?;
    let cls = pv.classify();
    let lam = pv.lambdas();
    let b = bases(&cls, &lam)?;
    let h = intersection_matrix_h(&cls, &lam)?;
    let (phis, psis) = standard_frames(pv, x)?;
    let c = cohomology_matrix(&phis, &psis, pv, x)?;
    let pm = period_matrices_for(&setup, &phis, &b.gamma, &b.delta, &psis)?;
    let err = pm.phi_error.iter().chain(pm.psi_error.iter()).flatten().fold(0.0f64, |a, &b| a.max(b));
    Ok(TprReport {
        residual: tpr_residual(&h, &c, &pm.phi, &pm.psi)?,
        rank_h: rank(&h, 1e-10),
        rank_c: rank(&c, 1e-10),
        h: to_rows(&h),
        c: to_rows(&c),
        phi: to_rows(&pm.phi),
        psi: to_rows(&pm.psi),
        quadrature_error: err,
        panels: pm.panels,
    })
}

/// G_{kj} = <phi_{k,m+2}, gamma_j>, k = 1..=m+1, at an aligned configuration.
pub fn frame_periods(pv: &ParameterVector, x: &PointConfiguration, tol: f64) -> Result<CMat> {
    let setup = PeriodSetup::new(pv, x, tol)?;
    let b = bases(&pv.classify(), &pv.lambdas())?;
    let (phis, _) = standard_frames(pv, x)?;
    Ok(period_matrices_for(&setup, &phis, &b.gamma, &[], &[])?.phi)
}

/// Matrix taking frame periods to the solution vector of the chosen Pfaffian system.
fn gauge(sys: &PfaffianSystem, x: &[C64]) -> CMat {
    let n = sys.m() + 1;
    match sys.kind {
        PfaffianKind::R => identity(n),
        PfaffianKind::Xi => sys.p.clone(),
        PfaffianKind::Theta => {
            let mut q = identity(n);
            for i in 1..n {
                q[(i, i)] = (x[i - 1] - 1.0).inv();
            }
            q * &sys.p
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneratorCheck {
    pub p: usize,
    pub q: usize,
    /// max |N - F M F^{-1}| / max(1, max |N|)
    pub residual: f64,
    /// |det M - lambda_p lambda_q|
    pub det_residual: f64,
    /// max |N - E|
    pub identity_deviation: f64,
    pub steps: usize,
    pub closest_approach: f64,
    pub continuation: Vec<Vec<C64>>,
    pub circuit: Vec<Vec<C64>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MonodromyCheckReport {
    pub kind: PfaffianKind,
    pub checks: Vec<GeneratorCheck>,
    pub max_residual: f64,
    pub max_det_residual: f64,
    pub max_identity_deviation: f64,
}

/// Continues the Pfaffian system around each generator loop and compares the result
/// with F M F^{-1}, F the fundamental matrix built from the frame periods.
pub fn verify_monodromy(
    pv: &ParameterVector,
    x: &PointConfiguration,
    kind: PfaffianKind,
    pairs: &[(usize, usize)],
    tol: f64,
) -> Result<MonodromyCheckReport> {
    let x = if x.aligned { x.clone() } else { x.clone().align_to(&pv.classify())? };
    let sys = PfaffianSystem::new(pv, kind);
    let g = frame_periods(pv, &x, tol)?;
    let f = gauge(&sys, &x.x) * g;
    let f_inv = inverse(&f)?;
    let n = pv.m + 1;
    let mut checks = Vec::new();
    for cm in all_circuit_matrices(pv)? {
        if !pairs.contains(&(cm.p, cm.q)) {
            continue;
        }
        let path = generator_loop(&x.x, cm.p, cm.q)?;
        let cont = continuation_matrix(&sys, &path, RTOL, ATOL)?;
        let predicted = &f * &cm.m * &f_inv;
        let scale = max_abs(&cont.y).max(1.0);
        checks.push(GeneratorCheck {
            p: cm.p,
            q: cm.q,
            residual: max_abs(&(&cont.y - predicted)) / scale,
            det_residual: (cm.det - cm.expected_det).norm(),
            identity_deviation: max_abs(&(&cont.y - identity(n))),
            steps: cont.steps,
            closest_approach: cont.closest_approach,
            continuation: to_rows(&cont.y),
            circuit: to_rows(&cm.m),
        });
    }
    let mx = |f: fn(&GeneratorCheck) -> f64| checks.iter().map(f).fold(0.0, f64::max);
    Ok(MonodromyCheckReport {
        kind,
        max_residual: mx(|g| g.residual),
        max_det_residual: mx(|g| g.det_residual),
        max_identity_deviation: mx(|g| g.identity_deviation),
        checks,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct WronskianReport {
    pub determinant: C64,
    /// max |d_k <phi_0, gamma_j> (central difference) - <(alpha_k phi_0 - phi_k)/(x_k - 1), gamma_j>|
    pub derivative_residual: f64,
    pub step: f64,
}

fn phi0_row(pv: &ParameterVector, x: &PointConfiguration, tol: f64) -> Result<Vec<C64>> {
    let setup = PeriodSetup::new(pv, x, tol)?;
    let b = bases(&pv.classify(), &pv.lambdas())?;
    let phi0 = RationalOneForm::pole(pv.m + 1, 1, c(1.0, 0.0));
    b.gamma.iter().map(|g| Ok(setup.chain(&phi0, g)?.value)).collect()
}

fn shifted(x: &PointConfiguration, moves: &[(usize, f64)]) -> Result<PointConfiguration> {
    let mut v = x.x.clone();
    for &(k, d) in moves {
        v[k] += d;
    }
    PointConfiguration::new(v)
}

/// The matrix with rows <phi_0, gamma_j> and <d_k phi_0, gamma_j>, d_k phi_0 represented
/// by (alpha_k phi_{m+1,m+2} - phi_{k,m+2})/(x_k - 1); the derivative rows are also
/// compared with central differences of the first row.
pub fn wronskian(pv: &ParameterVector, x: &PointConfiguration, tol: f64) -> Result<WronskianReport> {
    let x = if x.aligned { x.clone() } else { x.clone().align_to(&pv.classify())? };
    let m = pv.m;
    let setup = PeriodSetup::new(pv, &x, tol)?;
    let b = bases(&pv.classify(), &pv.lambdas())?;
    let fr = frames(pv, &x)?;
    let a = pv.alpha();
    let mut rows: Vec<RationalOneForm> = vec![fr.phi[m + 1].clone()];
    for k in 1..=m {
        let form = fr.phi[m + 1].scale(a[k]).plus(&fr.phi[k].scale(c(-1.0, 0.0)));
        rows.push(form.scale((x.x[k - 1] - 1.0).inv()));
    }
    let w = period_matrices_for(&setup, &rows, &b.gamma, &[], &[])?.phi;
    let h = 1e-4 * x.min_gap();
    let mut worst = 0.0f64;
    for k in 0..m {
        let up = phi0_row(pv, &shifted(&x, &[(k, h)])?, tol)?;
        let dn = phi0_row(pv, &shifted(&x, &[(k, -h)])?, tol)?;
        for j in 0..=m {
            let d = (up[j] - dn[j]) / (2.0 * h);
            worst = worst.max((d - w[(k + 1, j)]).norm() / w[(k + 1, j)].norm().max(1.0));
        }
    }
    Ok(WronskianReport { determinant: w.determinant(), derivative_residual: worst, step: h })
}

#[derive(Clone, Debug, Serialize)]
pub struct AnnihilatorReport {
    /// max over operators and basis chains of |L f| / max(sum of |terms of L f|, 1, |f|, |derivatives|);
    /// the floor keeps identically vanishing periods from reporting pure rounding noise
    /// as a relative error
    pub residual: f64,
    pub step: f64,
}

/// Applies the annihilating operators of F_D(a, b, c), with b_i = -alpha_i,
/// a = alpha_{m+2}, c = alpha_{m+1} + alpha_{m+2}, to x -> <phi_0, gamma_j> by
/// five-point differences.
pub fn annihilator_residuals(pv: &ParameterVector, x: &PointConfiguration, h: f64, tol: f64) -> Result<AnnihilatorReport> {
    let x = if x.aligned { x.clone() } else { x.clone().align_to(&pv.classify())? };
    let m = pv.m;
    let (a, b, cc) = pv.abc();
    let n = m + 1;
    let offs = [-2.0, -1.0, 1.0, 2.0];
    let w1 = [1.0, -8.0, 8.0, -1.0];
    let f0 = phi0_row(pv, &x, tol)?;
    let mut axis = vec![vec![vec![C64::new(0.0, 0.0); n]; 4]; m];
    for (k, ax) in axis.iter_mut().enumerate() {
        for (s, o) in offs.iter().enumerate() {
            ax[s] = phi0_row(pv, &shifted(&x, &[(k, o * h)])?, tol)?;
        }
    }
    let d1 = |k: usize, j: usize| -> C64 { (0..4).map(|s| axis[k][s][j] * w1[s]).sum::<C64>() / (12.0 * h) };
    let d2 = |k: usize, j: usize| -> C64 {
        (-axis[k][0][j] + axis[k][1][j] * 16.0 - f0[j] * 30.0 + axis[k][2][j] * 16.0 - axis[k][3][j]) / (12.0 * h * h)
    };
    let mut mixed = vec![vec![vec![C64::new(0.0, 0.0); n]; m]; m];
    for k in 0..m {
        for l in k + 1..m {
            let mut acc = vec![C64::new(0.0, 0.0); n];
            for (s, o) in offs.iter().enumerate() {
                for (t, p) in offs.iter().enumerate() {
                    let v = phi0_row(pv, &shifted(&x, &[(k, o * h), (l, p * h)])?, tol)?;
                    for j in 0..n {
                        acc[j] += v[j] * (w1[s] * w1[t]);
                    }
                }
            }
            for j in 0..n {
                mixed[k][l][j] = acc[j] / (144.0 * h * h);
                mixed[l][k][j] = mixed[k][l][j];
            }
        }
    }
    let xs = &x.x;
    let mut worst = 0.0f64;
    for j in 0..n {
        let mut floor = f0[j].norm().max(1.0);
        for i in 0..m {
            floor = floor.max(d1(i, j).norm()).max(d2(i, j).norm());
            for k in 0..m {
                floor = floor.max(mixed[i][k][j].norm());
            }
        }
        for i in 0..m {
            let mut terms = vec![xs[i] * (1.0 - xs[i]) * d2(i, j), (cc - (a + b[i] + 1.0) * xs[i]) * d1(i, j), -a * b[i] * f0[j]];
            for k in (0..m).filter(|&k| k != i) {
                terms.push((1.0 - xs[i]) * xs[k] * mixed[i][k][j]);
                terms.push(-b[i] * xs[k] * d1(k, j));
            }
            let total: C64 = terms.iter().sum();
            let scale: f64 = terms.iter().map(|t| t.norm()).sum();
            worst = worst.max(total.norm() / scale.max(floor));
        }
        for i in 0..m {
            for k in i + 1..m {
                let terms = [(xs[i] - xs[k]) * mixed[i][k][j], -b[k] * d1(i, j), b[i] * d1(k, j)];
                let total: C64 = terms.iter().sum();
                let scale: f64 = terms.iter().map(|t| t.norm()).sum();
                worst = worst.max(total.norm() / scale.max(floor));
            }
        }
    }
    Ok(AnnihilatorReport { residual: worst, step: h })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parameters::{aligned_configuration, default_spacing, sample_parameters, Stratum};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn relation_holds_in_every_stratum() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for m in 1..=3 {
            for st in Stratum::ALL {
                for _ in 0..4 {
                    let pv = sample_parameters(m, st, &mut rng);
                    let x = aligned_configuration(&pv.classify(), default_spacing(m)).unwrap();
                    let rep = verify_tpr(&pv, &x, 1e-12).unwrap_or_else(|e| panic!("{st:?} {:?}: {e}", pv.entries));
                    assert!(rep.residual < 1e-8, "{st:?} {:?}: {}", pv.entries, rep.residual);
                    assert_eq!((rep.rank_h, rep.rank_c), (m + 1, m + 1));
                }
            }
        }
    }

    #[test]
    fn continuation_reproduces_circuit_matrices() {
        let pv = ParameterVector::floats(&[0.31, -0.22, 0.47, 0.13, -0.69]).unwrap();
        let x = aligned_configuration(&pv.classify(), 0.25).unwrap();
        let pairs = crate::chains::generator_pairs(2);
        let rep = verify_monodromy(&pv, &x, PfaffianKind::Xi, &pairs, 1e-12).unwrap();
        assert_eq!(rep.checks.len(), 5);
        assert!(rep.max_residual < 1e-7 && rep.max_det_residual < 1e-12, "{rep:?}");

        // the Theta system differs by the single-valued gauge Q(x)
        let xi = verify_monodromy(&pv, &x, PfaffianKind::Xi, &[(1, 2)], 1e-12).unwrap();
        let th = verify_monodromy(&pv, &x, PfaffianKind::Theta, &[(1, 2)], 1e-12).unwrap();
        let mut q = identity(3);
        for i in 1..3 {
            q[(i, i)] = (x.x[i - 1] - 1.0).inv();
        }
        let n_xi = crate::linalg::from_rows(&xi.checks[0].continuation);
        let n_th = crate::linalg::from_rows(&th.checks[0].continuation);
        assert!(max_abs(&(n_th - &q * n_xi * inverse(&q).unwrap())) < 1e-8);
    }

    #[test]
    fn trivial_stratum_has_trivial_continuation() {
        let pv = ParameterVector::integers(&[0, 0, 0, 1, -1]).unwrap();
        let x = aligned_configuration(&pv.classify(), 0.25).unwrap();
        let rep = verify_monodromy(&pv, &x, PfaffianKind::Theta, &crate::chains::generator_pairs(2), 1e-12).unwrap();
        assert!(rep.max_identity_deviation < 1e-9, "{rep:?}");
    }

    #[test]
    fn periods_solve_the_system() {
        let pv = ParameterVector::floats(&[0.31, -0.22, 0.47, 0.13, -0.69]).unwrap();
        let x = aligned_configuration(&pv.classify(), 0.25).unwrap();
        let w = wronskian(&pv, &x, 1e-13).unwrap();
        assert!(w.determinant.norm() > 1e-8 && w.derivative_residual < 1e-6, "{w:?}");
        let an = annihilator_residuals(&pv, &x, 1e-3, 1e-13).unwrap();
        assert!(an.residual < 1e-6, "{an:?}");
    }
}
