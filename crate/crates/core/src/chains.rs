//! Loaded chains built from paths and loops based at a point of the upper half plane,
//! the standard homology bases and the homology intersection form.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{domain, Result};
use crate::linalg::{inverse, CMat, C64};
use crate::parameters::{IndexClassification, SiteClass};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainKind {
    /// From the base point to the site.
    Path,
    /// From the base point to the site, once around it counterclockwise, and back.
    Loop,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elementary {
    pub kind: ChainKind,
    pub site: usize,
}

/// A finite combination of elementary chains loaded with u (or with 1/u when `dual`).
#[derive(Clone, Debug, PartialEq)]
pub struct TwistedChain {
    pub terms: BTreeMap<Elementary, C64>,
    pub dual: bool,
}

impl TwistedChain {
    pub fn zero(dual: bool) -> Self {
        TwistedChain { terms: BTreeMap::new(), dual }
    }

    pub fn path(site: usize, dual: bool) -> Self {
        Self::single(ChainKind::Path, site, dual)
    }

    pub fn loop_at(site: usize, dual: bool) -> Self {
        Self::single(ChainKind::Loop, site, dual)
    }

    fn single(kind: ChainKind, site: usize, dual: bool) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Elementary { kind, site }, C64::new(1.0, 0.0));
        TwistedChain { terms, dual }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(mut self, k: C64) -> Self {
        for v in self.terms.values_mut() {
            *v *= k;
        }
        self.prune()
    }

    pub fn plus(mut self, other: &TwistedChain) -> Self {
        assert_eq!(self.dual, other.dual, "cannot add chains of different loading");
        for (e, v) in &other.terms {
            *self.terms.entry(*e).or_insert(C64::new(0.0, 0.0)) += v;
        }
        self.prune()
    }

    pub fn minus(self, other: &TwistedChain) -> Self {
        self.plus(&other.clone().scale(C64::new(-1.0, 0.0)))
    }

    fn prune(mut self) -> Self {
        self.terms.retain(|_, v| *v != C64::new(0.0, 0.0));
        self
    }

    /// Paths may only end on D (u-loaded) or on the dual D (1/u-loaded).
    pub fn check_sites(&self, cls: &IndexClassification) -> Result<()> {
        for e in self.terms.keys() {
            if e.site > cls.m + 2 {
                return domain(format!("site {} out of range", e.site));
            }
            if e.kind == ChainKind::Path {
                let need = if self.dual { SiteClass::Polar } else { SiteClass::Holomorphic };
                if cls.class_of(e.site) != need {
                    return domain(format!(
                        "a {} path cannot end at site {} ({:?})",
                        if self.dual { "1/u-loaded" } else { "u-loaded" },
                        e.site,
                        cls.class_of(e.site)
                    ));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChainBasisPair {
    pub gamma: Vec<TwistedChain>,
    pub delta: Vec<TwistedChain>,
}

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

fn check_nondegenerate(cls: &IndexClassification, lam: &[C64]) -> Result<()> {
    for &i in &cls.nonintegral {
        if (one() - lam[i]).norm() < 1e-13 {
            return domain(format!("exponent {i} is numerically integral (lambda = 1)"));
        }
    }
    Ok(())
}

/// The standard bases gamma_1..gamma_{m+1} and delta_1..delta_{m+1}.
pub fn bases(cls: &IndexClassification, lam: &[C64]) -> Result<ChainBasisPair> {
    check_nondegenerate(cls, lam)?;
    let n = cls.m + 1;
    let (r, s) = (cls.r(), cls.s());
    let o = &cls.ordered;
    let mut gamma = Vec::with_capacity(n);
    let mut delta = Vec::with_capacity(n);
    if !cls.fully_integral() {
        let i0 = o[0];
        let top = o[cls.m + 2];
        let loop0 = TwistedChain::loop_at(i0, false);
        let loop_top = TwistedChain::loop_at(top, true);
        for j in 1..=n {
            let ij = o[j];
            let (g, d) = if j <= r {
                (
                    TwistedChain::path(ij, false).minus(&loop0.clone().scale(one() / (one() - lam[i0]))),
                    TwistedChain::loop_at(ij, true).scale(-one()),
                )
            } else if j <= r + s {
                (
                    TwistedChain::loop_at(ij, false),
                    TwistedChain::path(ij, true)
                        .minus(&loop_top.clone().scale(one() / (one() - lam[top].inv()))),
                )
            } else {
                (
                    TwistedChain::loop_at(ij, false)
                        .minus(&loop0.clone().scale((one() - lam[ij]) / (one() - lam[i0]))),
                    TwistedChain::loop_at(ij, true).minus(
                        &loop_top
                            .clone()
                            .scale((one() - lam[ij].inv()) / (one() - lam[top].inv())),
                    ),
                )
            };
            gamma.push(g);
            delta.push(d);
        }
    } else {
        for j in 1..=n {
            let next = o[j + 1];
            if j < r {
                gamma.push(TwistedChain::path(next, false).minus(&TwistedChain::path(o[1], false)));
                delta.push(TwistedChain::loop_at(next, true).scale(-one()));
            } else {
                gamma.push(TwistedChain::loop_at(next, false));
                delta.push(TwistedChain::path(next, true).minus(&TwistedChain::path(o[0], true)));
            }
        }
    }
    Ok(ChainBasisPair { gamma, delta })
}

/// Intersection number of a 1/u-loaded elementary chain at p with a u-loaded one at q.
///
/// Chains leave the base point in the cyclic boundary order; a chain towards an earlier
/// site is crossed by every chain towards a later one, and the loop branch factors
/// (1 - lambda) and (1 - 1/lambda) come from the return legs.
fn pair_elementary(cls: &IndexClassification, lam: &[C64], d: Elementary, g: Elementary) -> Result<C64> {
    let (p, q) = (d.site, g.site);
    if p != q {
        if cls.pos(p) > cls.pos(q) {
            return Ok(C64::new(0.0, 0.0));
        }
        let a = match d.kind {
            ChainKind::Path => one(),
            ChainKind::Loop => one() - lam[p].inv(),
        };
        let b = match g.kind {
            ChainKind::Path => one(),
            ChainKind::Loop => one() - lam[q],
        };
        return Ok(-a * b);
    }
    match (d.kind, g.kind) {
        (ChainKind::Loop, ChainKind::Path) => Ok(-one()),
        (ChainKind::Path, ChainKind::Loop) => Ok(lam[q]),
        (ChainKind::Loop, ChainKind::Loop) => Ok(lam[q] - one()),
        (ChainKind::Path, ChainKind::Path) => {
            domain(format!("paths of both loadings end at site {q}; not a pair of relative cycles"))
        }
    }
}

/// The intersection form between a 1/u-loaded chain and a u-loaded chain.
pub fn intersection_h(cls: &IndexClassification, lam: &[C64], d: &TwistedChain, g: &TwistedChain) -> Result<C64> {
    if !d.dual || g.dual {
        return domain("intersection_h takes a 1/u-loaded chain first and a u-loaded chain second");
    }
    d.check_sites(cls)?;
    g.check_sites(cls)?;
    let mut acc = C64::new(0.0, 0.0);
    for (de, dc) in &d.terms {
        for (ge, gc) in &g.terms {
            acc += dc * gc * pair_elementary(cls, lam, *de, *ge)?;
        }
    }
    Ok(acc)
}

/// H_{ij} = I_h(delta_i, gamma_j) computed term by term.
pub fn pairing_matrix(cls: &IndexClassification, lam: &[C64], deltas: &[TwistedChain], gammas: &[TwistedChain]) -> Result<CMat> {
    let mut h = CMat::zeros(deltas.len(), gammas.len());
    for (i, d) in deltas.iter().enumerate() {
        for (j, g) in gammas.iter().enumerate() {
            h[(i, j)] = intersection_h(cls, lam, d, g)?;
        }
    }
    Ok(h)
}

/// Closed block form of the intersection matrix for the standard bases.
pub fn intersection_matrix_h(cls: &IndexClassification, lam: &[C64]) -> Result<CMat> {
    check_nondegenerate(cls, lam)?;
    let n = cls.m + 1;
    let mut h = CMat::identity(n, n);
    if cls.fully_integral() {
        return Ok(h);
    }
    let rs = cls.r() + cls.s();
    let l = |j: usize| lam[cls.ordered[j]];
    // rows and columns below are 1-based as in the bases
    for row in cls.r() + 1..=rs {
        for col in rs + 1..=n {
            h[(row - 1, col - 1)] = l(col) - one();
        }
    }
    for row in rs + 1..=n {
        h[(row - 1, row - 1)] = l(row) - one();
        for col in row + 1..=n {
            h[(row - 1, col - 1)] = (l(col) - one()) * (one() - l(row).inv());
        }
    }
    Ok(h)
}

/// Vanishing cycle pair attached to the generator (p, q), with the integral-parameter
/// substitutions already applied.
pub fn vanishing_pair(cls: &IndexClassification, lam: &[C64], p: usize, q: usize) -> (TwistedChain, TwistedChain) {
    use SiteClass::*;
    let lp = TwistedChain::path(p, false);
    let lq = TwistedChain::path(q, false);
    let cp = TwistedChain::loop_at(p, false);
    let cq = TwistedChain::loop_at(q, false);
    let dlp = TwistedChain::path(p, true);
    let dlq = TwistedChain::path(q, true);
    let dcp = TwistedChain::loop_at(p, true);
    let dcq = TwistedChain::loop_at(q, true);
    let (a, b) = (lam[p], lam[q]);
    match (cls.class_of(p), cls.class_of(q)) {
        (Holomorphic, Holomorphic) => (lq.minus(&lp), TwistedChain::zero(true)),
        (Holomorphic, Polar) => (cq, dcp),
        (Holomorphic, Nonintegral) => (cq.scale(one() / (one() - b)).minus(&lp), dcp.scale(one() - b)),
        (Polar, Holomorphic) => (cp.scale(-one()), dcq.scale(-one())),
        (Polar, Polar) => (TwistedChain::zero(false), dlq.minus(&dlp)),
        (Polar, Nonintegral) => (cp.scale(-one()), dcq.scale(-b).minus(&dlp.scale(one() - b))),
        (Nonintegral, Holomorphic) => (lq.minus(&cp.scale(one() / (one() - a))), dcq.scale(-(one() - a))),
        (Nonintegral, Polar) => (cq, dlq.scale(one() - a).plus(&dcp.scale(a))),
        (Nonintegral, Nonintegral) => (
            cq.scale(one() / (one() - b)).minus(&cp.scale(one() / (one() - a))),
            dcq.scale(-b * (one() - a)).plus(&dcp.scale(a * (one() - b))),
        ),
    }
}

/// Generators (p, q) of the fundamental group: 0 <= p < q <= m+1 except (0, m+1).
pub fn generator_pairs(m: usize) -> Vec<(usize, usize)> {
    let mut v = Vec::new();
    for p in 0..=m + 1 {
        for q in p + 1..=m + 1 {
            if !(p == 0 && q == m + 1) {
                v.push((p, q));
            }
        }
    }
    v
}

#[derive(Clone, Debug)]
pub struct VanishingCoords {
    pub gamma: TwistedChain,
    pub delta: TwistedChain,
    /// gamma_pq = sum_j y_j gamma_j
    pub y: CMat,
    /// delta_pq = sum_i z_i delta_i
    pub z: CMat,
    pub gamma_is_zero: bool,
    pub delta_is_zero: bool,
}

pub fn vanishing_pair_coords(cls: &IndexClassification, lam: &[C64], h: &CMat, p: usize, q: usize) -> Result<VanishingCoords> {
    if p >= q || q > cls.m + 1 || (p == 0 && q == cls.m + 1) {
        return domain(format!("({p}, {q}) is not a generator pair"));
    }
    let basis = bases(cls, lam)?;
    let (gamma, delta) = vanishing_pair(cls, lam, p, q);
    let hinv = inverse(h)?;
    let n = cls.m + 1;
    let mut by_delta = CMat::zeros(n, 1);
    let mut by_gamma = CMat::zeros(1, n);
    for k in 0..n {
        by_delta[(k, 0)] = intersection_h(cls, lam, &basis.delta[k], &gamma)?;
        by_gamma[(0, k)] = intersection_h(cls, lam, &delta, &basis.gamma[k])?;
    }
    Ok(VanishingCoords {
        gamma_is_zero: gamma.is_zero(),
        delta_is_zero: delta.is_zero(),
        gamma,
        delta,
        y: &hinv * by_delta,
        z: by_gamma * &hinv,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;
    use crate::parameters::{ParameterVector, Scalar};

    #[test]
    fn closed_form_matches_pairing_generic() {
        let pv = ParameterVector::floats(&[0.31, -0.22, 0.47, 0.13, -0.69]).unwrap();
        let cls = pv.classify();
        let lam = pv.lambdas();
        let b = bases(&cls, &lam).unwrap();
        let h1 = pairing_matrix(&cls, &lam, &b.delta, &b.gamma).unwrap();
        let h2 = intersection_matrix_h(&cls, &lam).unwrap();
        assert!(max_abs_diff(&h1, &h2) < 1e-13);
    }

    #[test]
    fn worked_example_bases_give_minus_identity() {
        let cls = ParameterVector::integers(&[0, 0, 0, 0, 0]).unwrap().classify();
        let lam = vec![C64::new(1.0, 0.0); 5];
        let g = vec![
            TwistedChain::loop_at(3, false),
            TwistedChain::path(1, false).minus(&TwistedChain::path(0, false)),
            TwistedChain::path(2, false).minus(&TwistedChain::path(0, false)),
        ];
        let d = vec![
            TwistedChain::path(4, true).minus(&TwistedChain::path(3, true)),
            TwistedChain::loop_at(1, true),
            TwistedChain::loop_at(2, true),
        ];
        let h = pairing_matrix(&cls, &lam, &d, &g).unwrap();
        assert!(max_abs_diff(&h, &(-CMat::identity(3, 3))) < 1e-15);

        let cls = ParameterVector::integers(&[0, 0, 0, 1, -1]).unwrap().classify();
        let g: Vec<_> = (0..3)
            .map(|k| TwistedChain::path(k, false).minus(&TwistedChain::path(3, false)))
            .collect();
        let d: Vec<_> = (0..3).map(|k| TwistedChain::loop_at(k, true)).collect();
        let h = pairing_matrix(&cls, &lam, &d, &g).unwrap();
        assert!(max_abs_diff(&h, &(-CMat::identity(3, 3))) < 1e-15);
    }

    #[test]
    fn paths_must_end_in_the_right_set() {
        let cls = ParameterVector::integers(&[0, 0, 0, 0, 0]).unwrap().classify();
        let lam = vec![C64::new(1.0, 0.0); 5];
        let bad = TwistedChain::path(3, false);
        let d = TwistedChain::loop_at(1, true);
        assert!(intersection_h(&cls, &lam, &d, &bad).is_err());
    }

    #[test]
    fn vanishing_pairs_pair_to_one_minus_lambda_product() {
        let pv = ParameterVector::from_alpha(vec![
            Scalar::real(0.37),
            Scalar::int(2),
            Scalar::int(-1),
            Scalar::real(0.21),
            Scalar::real(-0.44),
            Scalar::real(-1.14),
        ])
        .unwrap();
        let cls = pv.classify();
        let lam = pv.lambdas();
        for (p, q) in generator_pairs(3) {
            let (g, d) = vanishing_pair(&cls, &lam, p, q);
            let v = intersection_h(&cls, &lam, &d, &g).unwrap();
            assert!((v - (one() - lam[p] * lam[q])).norm() < 1e-13, "({p},{q})");
        }
    }

    #[test]
    fn generator_count() {
        assert_eq!(generator_pairs(3).len(), 9);
        assert_eq!(generator_pairs(1).len(), 2);
    }

    fn coords(alpha: &[f64], ints: &[(usize, i64)]) -> (IndexClassification, Vec<C64>, CMat) {
        let mut e: Vec<Scalar> = alpha.iter().map(|&a| Scalar::real(a)).collect();
        for &(i, k) in ints {
            e[i] = Scalar::int(k);
        }
        let pv = ParameterVector::from_alpha(e).unwrap();
        let cls = pv.classify();
        let lam = pv.lambdas();
        let h = intersection_matrix_h(&cls, &lam).unwrap();
        (cls, lam, h)
    }

    fn close_row(a: &CMat, want: &[C64]) -> bool {
        a.iter().zip(want).all(|(x, y)| (x - y).norm() < 1e-12)
    }

    #[test]
    fn two_integral_classes_table() {
        // alpha_1, alpha_2 holomorphic, alpha_3, alpha_4 polar, alpha_0, alpha_5 generic
        let (cls, lam, h) = coords(&[0.3, 0.0, 0.0, 0.0, 0.0, -0.3], &[(1, 0), (2, 1), (3, -1), (4, 0)]);
        assert_eq!(cls.ordered, vec![0, 1, 2, 3, 4, 5]);
        assert!(max_abs_diff(&h, &CMat::identity(4, 4)) < 1e-15);
        let z0 = C64::new(0.0, 0.0);
        let e = |k: usize| -> Vec<C64> { (0..4).map(|j| if j == k { one() } else { z0 }).collect() };
        let l0 = lam[0];
        let rows: Vec<((usize, usize), Vec<C64>, Vec<C64>)> = vec![
            ((0, 1), e(0), vec![one() - l0, z0, z0, z0]),
            ((0, 2), e(1), vec![z0, one() - l0, z0, z0]),
            ((0, 3), e(2), vec![one(), one(), one() - l0, z0]),
            ((1, 2), vec![-one(), one(), z0, z0], vec![z0; 4]),
            ((1, 3), e(2), vec![-one(), z0, z0, z0]),
            ((1, 4), e(3), vec![-one(), z0, z0, z0]),
            ((2, 3), e(2), vec![z0, -one(), z0, z0]),
            ((2, 4), e(3), vec![z0, -one(), z0, z0]),
            ((3, 4), vec![z0; 4], vec![z0, z0, -one(), one()]),
        ];
        for ((p, q), y, z) in rows {
            let v = vanishing_pair_coords(&cls, &lam, &h, p, q).unwrap();
            assert!(close_row(&v.y, &y), "y ({p},{q}): {}", v.y);
            assert!(close_row(&v.z, &z), "z ({p},{q}): {}", v.z);
        }
    }

    #[test]
    fn one_holomorphic_one_polar_table() {
        let (cls, lam, h) = coords(&[0.3, 0.0, 0.0, 0.45, 0.15, 0.1], &[(1, 1), (2, -2)]);
        assert_eq!(cls.ordered, vec![0, 1, 2, 3, 4, 5]);
        let z0 = C64::new(0.0, 0.0);
        let (l0, l3, l4) = (lam[0], lam[3], lam[4]);
        let e = |k: usize| -> Vec<C64> { (0..4).map(|j| if j == k { one() } else { z0 }).collect() };
        let rows: Vec<((usize, usize), Vec<C64>, Vec<C64>)> = vec![
            ((0, 1), e(0), vec![one() - l0, z0, z0, z0]),
            ((0, 2), e(1), vec![one(), one() - l0, -one(), -l3.inv()]),
            ((0, 3), vec![z0, z0, one() / (one() - l3), z0], vec![one() - l3, z0, l0 * l3 - one(), one() - l3.inv()]),
            ((1, 2), e(1), vec![-one(), z0, z0, z0]),
            ((1, 3), vec![-one(), z0, one() / (one() - l3), z0], vec![-(one() - l3), z0, z0, z0]),
            ((1, 4), vec![-one(), z0, z0, one() / (one() - l4)], vec![-(one() - l4), z0, z0, z0]),
            ((2, 3), vec![z0, -one(), z0, z0], vec![z0, -(one() - l3), -l3, z0]),
            ((2, 4), vec![z0, -one(), z0, z0], vec![z0, -(one() - l4), z0, -l4]),
            (
                (3, 4),
                vec![z0, z0, -one() / (one() - l3), one() / (one() - l4)],
                vec![z0, z0, l3 * (one() - l4), -l4 * (one() - l3)],
            ),
        ];
        for ((p, q), y, z) in rows {
            let v = vanishing_pair_coords(&cls, &lam, &h, p, q).unwrap();
            assert!(close_row(&v.y, &y), "y ({p},{q}): {}", v.y);
            assert!(close_row(&v.z, &z), "z ({p},{q}): {}", v.z);
        }
    }
}
