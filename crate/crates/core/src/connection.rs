//! Residue matrices of the Gauss-Manin connection, the Pfaffian systems in the
//! frame, F and f gauges, and the structural checks on them.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cocycles::{eigen_cocycles, frames, residue_pairing, RationalOneForm, Series};
use crate::error::{domain, Error, Result};
use crate::linalg::{c, char_poly, col, column_space, inverse, max_abs, rank, row, span_residual, CMat, C64, TWO_PI_I};
use crate::parameters::{ParameterVector, PointConfiguration};

/// R_{i,j} for 0 <= i < j <= m+1, (i, j) != (0, m+1).
#[derive(Clone, Debug)]
pub struct ResidueMatrixSet {
    pub m: usize,
    pub r: BTreeMap<(usize, usize), CMat>,
}

impl ResidueMatrixSet {
    /// R_{i,j} = R_{j,i}; `None` for (0, m+1).
    pub fn get(&self, i: usize, j: usize) -> Option<&CMat> {
        self.r.get(&(i.min(j), i.max(j)))
    }
}

pub fn residue_matrices(pv: &ParameterVector) -> ResidueMatrixSet {
    let m = pv.m;
    let mut r = BTreeMap::new();
    for i in 0..=m + 1 {
        for j in i + 1..=m + 1 {
            if i == 0 && j == m + 1 {
                continue;
            }
            let (v, w) = eigen_cocycles(i, j, pv).expect("valid pair");
            r.insert((i, j), -(col(&w) * row(&v)));
        }
    }
    ResidueMatrixSet { m, r }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PfaffianKind {
    /// Frame (phi_{1,m+2}, .., phi_{m+1,m+2}).
    R,
    /// F = (f_0, (x_1 - 1) d_1 f_0, ..): Xi = P R P^{-1}.
    Xi,
    /// f = (f_0, d_1 f_0, .., d_m f_0): Theta = Q Xi Q^{-1} + dQ Q^{-1}.
    Theta,
}

#[derive(Clone, Debug)]
pub struct PfaffianSystem {
    pub kind: PfaffianKind,
    pub residues: ResidueMatrixSet,
    pub p: CMat,
    pub p_inv: CMat,
}

/// P with first row (0, .., 0, 1) and row i = -e_i + alpha_i e_{m+1}.
pub fn frame_to_f_matrix(pv: &ParameterVector) -> CMat {
    let m = pv.m;
    let a = pv.alpha();
    let mut p = CMat::zeros(m + 1, m + 1);
    p[(0, m)] = c(1.0, 0.0);
    for i in 1..=m {
        p[(i, i - 1)] = c(-1.0, 0.0);
        p[(i, m)] = a[i];
    }
    p
}

impl PfaffianSystem {
    pub fn new(pv: &ParameterVector, kind: PfaffianKind) -> Self {
        let p = frame_to_f_matrix(pv);
        let p_inv = inverse(&p).expect("P is unimodular");
        PfaffianSystem { kind, residues: residue_matrices(pv), p, p_inv }
    }

    pub fn m(&self) -> usize {
        self.residues.m
    }

    fn sites(&self, x: &[C64]) -> Vec<C64> {
        let mut s = Vec::with_capacity(x.len() + 2);
        s.push(c(0.0, 0.0));
        s.extend_from_slice(x);
        s.push(c(1.0, 0.0));
        s
    }

    fn check_point(&self, x: &[C64]) -> Result<()> {
        if x.len() != self.m() {
            return Err(Error::Malformed(format!("expected {} coordinates, got {}", self.m(), x.len())));
        }
        PointConfiguration::new(x.to_vec()).map(|_| ())
    }

    /// dx_k-component of R(x), k = 1..=m.
    fn r_component(&self, s: &[C64], k: usize) -> CMat {
        let n = self.m() + 1;
        let mut out = CMat::zeros(n, n);
        for j in 0..s.len() {
            if j != k {
                out += self.residues.get(k, j).unwrap() / (s[k] - s[j]);
            }
        }
        out
    }

    /// d/dx_l of the dx_k-component of R(x).
    fn r_component_derivative(&self, s: &[C64], k: usize, l: usize) -> CMat {
        let n = self.m() + 1;
        if k == l {
            let mut out = CMat::zeros(n, n);
            for j in 0..s.len() {
                if j != k {
                    out -= self.residues.get(k, j).unwrap() / (s[k] - s[j]).powi(2);
                }
            }
            out
        } else {
            self.residues.get(k, l).unwrap() / (s[k] - s[l]).powi(2)
        }
    }

    fn q(&self, s: &[C64]) -> (CMat, CMat) {
        let n = self.m() + 1;
        let mut q = CMat::identity(n, n);
        let mut qi = CMat::identity(n, n);
        for i in 1..n {
            q[(i, i)] = (s[i] - 1.0).inv();
            qi[(i, i)] = s[i] - 1.0;
        }
        (q, qi)
    }

    /// Coefficient matrices of dx_1, .., dx_m.
    pub fn at(&self, x: &[C64]) -> Result<Vec<CMat>> {
        self.check_point(x)?;
        let s = self.sites(x);
        let m = self.m();
        let mut out = Vec::with_capacity(m);
        for k in 1..=m {
            let r = self.r_component(&s, k);
            out.push(match self.kind {
                PfaffianKind::R => r,
                PfaffianKind::Xi => &self.p * r * &self.p_inv,
                PfaffianKind::Theta => {
                    let (q, qi) = self.q(&s);
                    let mut t = &q * (&self.p * r * &self.p_inv) * &qi;
                    t[(k, k)] -= (s[k] - 1.0).inv();
                    t
                }
            });
        }
        Ok(out)
    }

    /// d/dx_l of the dx_k-coefficient, exact.
    pub fn derivative(&self, x: &[C64], k: usize, l: usize) -> Result<CMat> {
        self.check_point(x)?;
        let s = self.sites(x);
        let dr = self.r_component_derivative(&s, k, l);
        Ok(match self.kind {
            PfaffianKind::R => dr,
            PfaffianKind::Xi => &self.p * dr * &self.p_inv,
            PfaffianKind::Theta => {
                let (q, qi) = self.q(&s);
                let xi = &self.p * self.r_component(&s, k) * &self.p_inv;
                let dxi = &self.p * dr * &self.p_inv;
                let n = self.m() + 1;
                // dQ/dx_l has the single entry -1/(x_l - 1)^2 at (l, l)
                let mut dq = CMat::zeros(n, n);
                dq[(l, l)] = -(s[l] - 1.0).powi(-2);
                let mut out = &dq * &xi * &qi + &q * dxi * &qi - &q * &xi * &qi * &dq * &qi;
                if k == l {
                    out[(k, k)] += (s[k] - 1.0).powi(-2);
                }
                out
            }
        })
    }
}

pub fn connection_at(sys: &PfaffianSystem, x: &PointConfiguration) -> Result<Vec<CMat>> {
    sys.at(&x.x)
}

#[derive(Clone, Debug, Serialize)]
pub struct IntegrabilityReport {
    /// max over points and k < l of |d_k W_l - d_l W_k - [W_k, W_l]| / (1 + |dW| + |W|^2)
    pub flatness_residual: f64,
    /// max of the residue commutator identities, relative to |R|^2
    pub commutator_residual: f64,
    pub trials: usize,
    pub seed: u64,
}

/// A random point off the singular locus: every pairwise gap at least 0.1.
pub fn random_point(m: usize, rng: &mut ChaCha8Rng) -> Vec<C64> {
    loop {
        let x: Vec<C64> = (0..m).map(|_| c(rng.random_range(-1.5..2.5), rng.random_range(-1.0..1.0))).collect();
        if let Ok(pc) = PointConfiguration::new(x.clone()) {
            if pc.min_gap() >= 0.1 {
                return x;
            }
        }
    }
}

pub fn check_integrability(sys: &PfaffianSystem, trials: usize, seed: u64) -> Result<IntegrabilityReport> {
    let m = sys.m();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut flat: f64 = 0.0;
    for _ in 0..trials {
        let x = random_point(m, &mut rng);
        let w = sys.at(&x)?;
        for k in 0..m {
            for l in k + 1..m {
                let dkl = sys.derivative(&x, l + 1, k + 1)?;
                let dlk = sys.derivative(&x, k + 1, l + 1)?;
                let comm = &w[k] * &w[l] - &w[l] * &w[k];
                let res = &dkl - &dlk - &comm;
                let scale = 1.0 + max_abs(&dkl) + max_abs(&dlk) + max_abs(&w[k]) * max_abs(&w[l]);
                flat = flat.max(max_abs(&res) / scale);
            }
        }
    }
    Ok(IntegrabilityReport { flatness_residual: flat, commutator_residual: commutator_identities(&sys.residues), trials, seed })
}

/// [R_ij, R_ik + R_jk] = 0 for triples and [R_ij, R_kl] = 0 for disjoint pairs; pairs
/// equal to (0, m+1) are skipped.
pub fn commutator_identities(rs: &ResidueMatrixSet) -> f64 {
    let n = rs.m + 2;
    let norm = rs.r.values().map(max_abs).fold(1.0, f64::max);
    let comm = |a: &CMat, b: &CMat| a * b - b * a;
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if i == j || j == k || i == k {
                    continue;
                }
                if let (Some(a), Some(b), Some(d)) = (rs.get(i, j), rs.get(i, k), rs.get(j, k)) {
                    worst = worst.max(max_abs(&comm(a, &(b + d))));
                }
            }
        }
    }
    for (&(i, j), a) in &rs.r {
        for (&(k, l), b) in &rs.r {
            if [k, l].iter().all(|z| *z != i && *z != j) {
                worst = worst.max(max_abs(&comm(a, b)));
            }
        }
    }
    worst / (norm * norm)
}

#[derive(Clone, Debug, Serialize)]
pub struct EigenReport {
    pub pair: (usize, usize),
    pub eigenvalue: C64,
    pub rank: usize,
    /// max deviation of det(zE - R) from z^m (z - (alpha_i + alpha_j))
    pub charpoly_residual: f64,
    /// alpha_i + alpha_j = 0 with alpha_i alpha_j != 0
    pub not_diagonalizable: bool,
}

pub fn eigen_report(pv: &ParameterVector) -> Vec<EigenReport> {
    let a = pv.alpha();
    let rs = residue_matrices(pv);
    rs.r
        .iter()
        .map(|(&(i, j), r)| {
            let ev = a[i] + a[j];
            let cp = char_poly(r);
            let mut want = vec![c(0.0, 0.0); cp.len()];
            want[0] = c(1.0, 0.0);
            want[1] = -ev;
            let res = cp.iter().zip(&want).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max);
            EigenReport {
                pair: (i, j),
                eigenvalue: ev,
                rank: rank(r, 1e-10),
                charpoly_residual: res,
                not_diagonalizable: ev.norm() < 1e-12 && (a[i] * a[j]).norm() > 1e-12,
            }
        })
        .collect()
}

/// Residue matrices of the dual connection in the frame (psi_{0,1}, .., psi_{0,m+1}),
/// assembled from residue pairings of the explicit forms phi_{i,j} and psi_{i,j}.
pub fn dual_residue_matrices_from_forms(pv: &ParameterVector, x: &PointConfiguration) -> Result<ResidueMatrixSet> {
    let m = pv.m;
    let a = pv.alpha();
    let fr = frames(pv, x)?;
    let phi = |i: usize| fr.phi[i].clone();
    let psi0 = |i: usize| fr.psi[i - 1].clone();
    let mut out = BTreeMap::new();
    for i in 0..=m + 1 {
        for j in i + 1..=m + 1 {
            if i == 0 && j == m + 1 {
                continue;
            }
            // (phi_{i,j}, psi_{i,j}) from the listed (p, q) with p in 1..=m; (0, q) = -(q, 0)
            let (p, q, sgn) = if i == 0 { (j, 0, -1.0) } else { (i, j, 1.0) };
            let (phi_pq, psi_pq): (RationalOneForm, RationalOneForm) = if q == m + 1 {
                (phi(p).plus(&phi(m + 1).scale(-a[p])), psi0(m + 1).plus(&psi0(p).scale(-a[m + 1])))
            } else if q == 0 {
                (phi(p).scale(a[0]).plus(&phi(0).scale(-a[p])), psi0(p).scale(c(-1.0, 0.0)))
            } else {
                (phi(p).scale(a[q]).plus(&phi(q).scale(-a[p])), psi0(q).plus(&psi0(p).scale(c(-1.0, 0.0))))
            };
            let (phi_ij, psi_ij) = (phi_pq.scale(c(sgn, 0.0)), psi_pq.scale(c(sgn, 0.0)));
            let mut v = vec![c(0.0, 0.0); m + 1];
            let mut w = vec![c(0.0, 0.0); m + 1];
            for k in 1..=m + 1 {
                v[k - 1] = residue_pairing(&phi_ij, &psi0(k), pv, x)? / TWO_PI_I;
                w[k - 1] = residue_pairing(&phi(k), &psi_ij, pv, x)? / TWO_PI_I;
            }
            out.insert((i, j), col(&w) * row(&v));
        }
    }
    Ok(ResidueMatrixSet { m, r: out })
}

/// Partial derivative in x_j (1-based) of a vector-valued analytic function of x by the
/// trapezoid rule on a circle of radius r (Cauchy's formula).
pub fn cauchy_partial(
    f: &dyn Fn(&[C64]) -> Result<Vec<C64>>,
    x: &[C64],
    j: usize,
    r: f64,
    n: usize,
) -> Result<Vec<C64>> {
    let mut acc: Option<Vec<C64>> = None;
    for k in 0..n {
        let e = C64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / n as f64);
        let mut y = x.to_vec();
        y[j - 1] += e * r;
        let v = f(&y)?;
        let a = acc.get_or_insert_with(|| vec![c(0.0, 0.0); v.len()]);
        for (s, vi) in a.iter_mut().zip(v) {
            *s += vi / e;
        }
    }
    Ok(acc.unwrap().into_iter().map(|s| s / (r * n as f64)).collect())
}

fn local_unit(pts: &[C64], site: usize, power: f64, alpha: &[C64], end: i32) -> Series {
    // prod over finite l != site of (1 + z/(x_site - x_l))^{power alpha_l}; at infinity
    // prod (1 - x_l s)^{power alpha_l}
    let mut acc = Series::binomial(c(0.0, 0.0), c(0.0, 0.0), end);
    for l in 0..pts.len() {
        if l == site {
            continue;
        }
        let w = if site == pts.len() { -pts[l] } else { (pts[site] - pts[l]).inv() };
        acc = acc.mul(&Series::binomial(w, alpha[l] * power, end));
    }
    acc
}

/// Frame coordinates of the exact cocycle nabla_t(h_i/u) at a site of D, up to an
/// analytic scalar factor: the residues of psi_{0,k}/u at the site.
pub fn exact_generator_coords(pv: &ParameterVector, x: &[C64], site: usize) -> Result<Vec<C64>> {
    let pc = PointConfiguration::new(x.to_vec())?;
    let pts = pc.finite_sites();
    let e = pv.entries[site].as_integer().ok_or_else(|| Error::Domain(format!("site {site} is not integral")))?;
    let fr = frames(pv, &pc)?;
    let alpha = pv.alpha();
    let unit = local_unit(&pts, site, -1.0, &alpha, 64);
    let mut out = Vec::with_capacity(pv.m + 1);
    for k in 0..=pv.m {
        let form = &fr.psi[k];
        // coefficient of z^{alpha - 1} in psi(z) * unit(z)
        let target = e as i32 - 1;
        let start = form.local_start(&pts, site);
        if target < start {
            out.push(c(0.0, 0.0));
            continue;
        }
        let ps = form.expand(&pts, site, target + 1);
        let prod = ps.mul(&unit.clone().truncate(target + 1 - start));
        out.push(prod.get(target));
    }
    Ok(out)
}

/// The functional phi -> res(u phi) at a site of the dual D, as a column in frame coordinates.
pub fn polar_functional(pv: &ParameterVector, x: &[C64], site: usize) -> Result<Vec<C64>> {
    let pc = PointConfiguration::new(x.to_vec())?;
    let pts = pc.finite_sites();
    let e = pv.entries[site].as_integer().ok_or_else(|| Error::Domain(format!("site {site} is not integral")))?;
    let fr = frames(pv, &pc)?;
    let alpha = pv.alpha();
    let unit = local_unit(&pts, site, 1.0, &alpha, 64);
    let mut out = Vec::with_capacity(pv.m + 1);
    for b in 1..=pv.m + 1 {
        let form = &fr.phi[b];
        let target = -(e as i32) - 1;
        let start = form.local_start(&pts, site);
        if target < start {
            out.push(c(0.0, 0.0));
            continue;
        }
        let ps = form.expand(&pts, site, target + 1);
        let prod = ps.mul(&unit.clone().truncate(target + 1 - start));
        out.push(prod.get(target));
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct SubspaceCheck {
    pub site: usize,
    pub dimension: usize,
    pub expected_dimension: usize,
    /// relative distance of the differentiated section from the subspace
    pub residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct InvariantSubspaceReport {
    /// one line per site of D: each line spanned by nabla_t(h_i/u) is invariant
    pub exact_lines: Vec<SubspaceCheck>,
    /// total dimension of the span of the exact generators
    pub exact_span_dimension: usize,
    pub expected_exact_span_dimension: usize,
    /// one hyperplane per site of the dual D
    pub polar_hyperplanes: Vec<SubspaceCheck>,
    pub max_residual: f64,
}

const CAUCHY_NODES: usize = 32;

pub fn invariant_subspaces(pv: &ParameterVector, x: &[C64]) -> Result<InvariantSubspaceReport> {
    let m = pv.m;
    let cls = pv.classify();
    let pc = PointConfiguration::new(x.to_vec())?;
    let sys = PfaffianSystem::new(pv, PfaffianKind::R);
    let comps = sys.at(x)?;
    let radius = 0.1 * pc.min_gap();
    let mut worst: f64 = 0.0;

    let mut lines = Vec::new();
    let mut all = Vec::new();
    for &i in &cls.holomorphic {
        let f = |y: &[C64]| exact_generator_coords(pv, y, i);
        let cvec = f(x)?;
        let scale = cvec.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let mut res: f64 = 0.0;
        let nonzero = scale > 1e-12;
        if nonzero {
            let q = column_space(&col(&cvec), 1e-12);
            for j in 1..=m {
                let d = cauchy_partial(&f, x, j, radius, CAUCHY_NODES)?;
                let moved = row(&d) + row(&cvec) * &comps[j - 1];
                let denom = 1.0 + max_abs(&row(&d)) / scale + max_abs(&comps[j - 1]);
                res = res.max(span_residual(&q, &moved.transpose().scale(1.0 / scale)) / denom);
            }
        }
        worst = worst.max(res);
        lines.push(SubspaceCheck { site: i, dimension: nonzero as usize, expected_dimension: 1, residual: res });
        all.push(cvec);
    }
    let span_dim = if all.is_empty() {
        0
    } else {
        let mat = CMat::from_fn(all.len(), m + 1, |a, b| all[a][b]);
        rank(&mat, 1e-9)
    };
    let expected_span = if cls.fully_integral() { cls.r().saturating_sub(1) } else { cls.r() };

    let mut hyper = Vec::new();
    for &k in &cls.polar {
        let f = |y: &[C64]| polar_functional(pv, y, k);
        let avec = f(x)?;
        let scale = avec.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let degenerate = scale <= 1e-12;
        let mut res: f64 = 0.0;
        if !degenerate {
            let q = column_space(&col(&avec), 1e-12);
            for j in 1..=m {
                let d = cauchy_partial(&f, x, j, radius, CAUCHY_NODES)?;
                let moved = col(&d) - &comps[j - 1] * col(&avec);
                let denom = 1.0 + max_abs(&col(&d)) / scale + max_abs(&comps[j - 1]);
                res = res.max(span_residual(&q, &moved.scale(1.0 / scale)) / denom);
            }
        }
        worst = worst.max(res);
        let expected = if cls.fully_integral() && cls.s() == 1 { m + 1 } else { m };
        hyper.push(SubspaceCheck {
            site: k,
            dimension: if degenerate { m + 1 } else { m },
            expected_dimension: expected,
            residual: res,
        });
    }
    Ok(InvariantSubspaceReport {
        exact_lines: lines,
        exact_span_dimension: span_dim,
        expected_exact_span_dimension: expected_span,
        polar_hyperplanes: hyper,
        max_residual: worst,
    })
}

/// Spot check of the residue-matrix formula against the I_c expression of the connection:
/// the dual residue matrices built from forms must equal -R_{i,j}.
pub fn dual_antisymmetry_residual(pv: &ParameterVector, x: &PointConfiguration) -> Result<f64> {
    let rs = residue_matrices(pv);
    let dual = dual_residue_matrices_from_forms(pv, x)?;
    let mut worst: f64 = 0.0;
    for (k, r) in &rs.r {
        let d = dual.r.get(k).ok_or_else(|| Error::Numerical("missing pair".into()))?;
        worst = worst.max(max_abs(&(d + r)));
    }
    Ok(worst)
}

/// Ensures the point is usable for the Pfaffian system.
pub fn require_regular(x: &[C64]) -> Result<()> {
    if x.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return domain("non-finite coordinate");
    }
    PointConfiguration::new(x.to_vec()).map(|_| ())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parameters::Scalar;

    fn generic(m: usize, seed: u64) -> ParameterVector {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut a: Vec<f64> = (0..m + 2).map(|_| rng.random_range(-1.5..1.5)).collect();
        a.push(-a.iter().sum::<f64>());
        ParameterVector::floats(&a).unwrap()
    }

    #[test]
    fn eigenvalues_and_rank() {
        for pv in [generic(3, 1), ParameterVector::integers(&[0, 0, 0, 1, -1]).unwrap()] {
            for e in eigen_report(&pv) {
                assert!(e.rank <= 1);
                assert!(e.charpoly_residual < 1e-10, "{:?}", e);
            }
        }
        let zero = ParameterVector::integers(&[0, 0, 0, 0, 0]).unwrap();
        assert!(residue_matrices(&zero).r.get(&(1, 2)).map(max_abs).unwrap() == 0.0);
    }

    #[test]
    fn integrable() {
        for m in 1..=4 {
            let pv = generic(m, 10 + m as u64);
            for kind in [PfaffianKind::R, PfaffianKind::Xi, PfaffianKind::Theta] {
                let rep = check_integrability(&PfaffianSystem::new(&pv, kind), 5, 7).unwrap();
                assert!(rep.flatness_residual < 1e-10, "m={m} {kind:?} {rep:?}");
                assert!(rep.commutator_residual < 1e-12, "m={m} {rep:?}");
            }
        }
    }

    #[test]
    fn theta_matches_gauge_formula() {
        let pv = generic(2, 3);
        let x = [c(0.2, 0.1), c(1.7, -0.3)];
        let xi = PfaffianSystem::new(&pv, PfaffianKind::Xi).at(&x).unwrap();
        let th = PfaffianSystem::new(&pv, PfaffianKind::Theta).at(&x).unwrap();
        // finite-difference dQ Q^{-1} as an independent check of the gauge term
        for k in 0..2 {
            let q = CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0, 0.0), (x[0] - 1.0).inv(), (x[1] - 1.0).inv()]));
            let qi = inverse(&q).unwrap();
            let h = 1e-6;
            let mut xp = x;
            xp[k] += h;
            let qp = CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0, 0.0), (xp[0] - 1.0).inv(), (xp[1] - 1.0).inv()]));
            let want = &q * &xi[k] * &qi + (qp - &q) / c(h, 0.0) * &qi;
            assert!(max_abs(&(want - &th[k])) < 1e-5);
        }
    }

    #[test]
    fn dual_matrices_from_forms() {
        let x = PointConfiguration::real(&[0.3, 0.6]).unwrap();
        let pv = ParameterVector::floats(&[-1.1, -0.2, -0.5, 1.4, 0.4]).unwrap();
        assert!(dual_antisymmetry_residual(&pv, &x).unwrap() < 1e-10);
        let pv = ParameterVector::from_alpha(vec![
            Scalar::int(0),
            Scalar::ratio(1, 3),
            Scalar::int(2),
            Scalar::ratio(-1, 3),
            Scalar::int(-2),
        ])
        .unwrap();
        assert!(dual_antisymmetry_residual(&pv, &x).unwrap() < 1e-10);
    }

    #[test]
    fn invariant_subspaces_generic_and_integral() {
        let x = [c(0.3, 0.0), c(0.6, 0.0)];
        for al in [[0, 0, 0, 0, 0], [0, 0, 0, 1, -1], [2, 0, -1, 0, -1], [1, 0, -1, 0, 0]] {
            let pv = ParameterVector::integers(&al).unwrap();
            let rep = invariant_subspaces(&pv, &x).unwrap();
            assert_eq!(rep.exact_span_dimension, rep.expected_exact_span_dimension, "{al:?}");
            for h in &rep.polar_hyperplanes {
                assert_eq!(h.dimension, h.expected_dimension, "{al:?}");
            }
            assert!(rep.max_residual < 1e-12, "{al:?} {rep:?}");
        }
        let pv = ParameterVector::from_alpha(vec![
            Scalar::ratio(1, 3),
            Scalar::int(1),
            Scalar::int(-2),
            Scalar::ratio(1, 2),
            Scalar::ratio(1, 6),
        ])
        .unwrap();
        let rep = invariant_subspaces(&pv, &[c(0.3, 0.0), c(0.6, 0.0)]).unwrap();
        assert_eq!(rep.exact_span_dimension, 1);
        assert!(rep.max_residual < 1e-12, "{rep:?}");
    }
}
