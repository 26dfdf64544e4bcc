//! Circuit matrices of the generators of the fundamental group and the integral-parameter
//! reducibility / triviality classification.

use serde::Serialize;

use crate::chains::{bases, generator_pairs, intersection_h, intersection_matrix_h, vanishing_pair_coords, TwistedChain};
use crate::error::{domain, Result};
use crate::linalg::{column_space, identity, inverse, max_abs, span_residual, CMat, C64};
use crate::parameters::{IndexClassification, ParameterVector};

#[derive(Clone, Debug, Serialize)]
pub struct CircuitMatrix {
    pub p: usize,
    pub q: usize,
    /// Acts on coordinate columns in the basis gamma_1..gamma_{m+1}.
    #[serde(skip)]
    pub m: CMat,
    #[serde(skip)]
    pub y: CMat,
    #[serde(skip)]
    pub z: CMat,
    pub det: C64,
    /// lambda_p lambda_q
    pub expected_det: C64,
    /// The vanishing cycle or its dual is the zero chain.
    pub degenerate: bool,
}

/// M = E - y z H.
pub fn circuit_matrix(p: usize, q: usize, cls: &IndexClassification, lam: &[C64], h: &CMat) -> Result<CircuitMatrix> {
    let v = vanishing_pair_coords(cls, lam, h, p, q)?;
    let n = cls.m + 1;
    let m = identity(n) - &v.y * &v.z * h;
    Ok(CircuitMatrix {
        p,
        q,
        det: m.determinant(),
        expected_det: lam[p] * lam[q],
        m,
        y: v.y,
        z: v.z,
        degenerate: v.gamma_is_zero || v.delta_is_zero,
    })
}

pub fn all_circuit_matrices(pv: &ParameterVector) -> Result<Vec<CircuitMatrix>> {
    let cls = pv.classify();
    let lam = pv.lambdas();
    let h = intersection_matrix_h(&cls, &lam)?;
    generator_pairs(pv.m).into_iter().map(|(p, q)| circuit_matrix(p, q, &cls, &lam, &h)).collect()
}

/// Parses "all" or "p,q".
pub fn select_pairs(m: usize, spec: &str) -> Result<Vec<(usize, usize)>> {
    if spec.trim() == "all" {
        return Ok(generator_pairs(m));
    }
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return crate::error::malformed(format!("pairs must be `all` or `p,q`, got `{spec}`"));
    }
    let p: usize = parts[0].parse().map_err(|_| crate::Error::Malformed(format!("bad index `{}`", parts[0])))?;
    let q: usize = parts[1].parse().map_err(|_| crate::Error::Malformed(format!("bad index `{}`", parts[1])))?;
    if !generator_pairs(m).contains(&(p, q)) {
        return domain(format!("({p}, {q}) is not a generator pair for m = {m}"));
    }
    Ok(vec![(p, q)])
}

/// Coordinates of a u-loaded chain in the basis gamma, via H^{-1} (I_h(delta_k, g))_k.
pub fn chain_coords(cls: &IndexClassification, lam: &[C64], h: &CMat, g: &TwistedChain) -> Result<CMat> {
    let b = bases(cls, lam)?;
    let mut rhs = CMat::zeros(cls.m + 1, 1);
    for (k, d) in b.delta.iter().enumerate() {
        rhs[(k, 0)] = intersection_h(cls, lam, d, g)?;
    }
    Ok(inverse(h)? * rhs)
}

#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub description: String,
    /// Basis columns of the invariant subspace in gamma coordinates.
    #[serde(skip)]
    pub basis: CMat,
    pub dimension: usize,
    /// max over generators of the distance of M W from span W
    pub invariance_residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RepresentationReport {
    pub reducible: bool,
    pub trivial: bool,
    pub witnesses: Vec<Witness>,
    /// max |M - E| over generators; zero in the trivial strata
    pub max_deviation_from_identity: f64,
}

fn witness(description: String, w: CMat, ms: &[CircuitMatrix]) -> Witness {
    let q = column_space(&w, 1e-10);
    let res = ms.iter().map(|c| span_residual(&q, &(&c.m * &q))).fold(0.0, f64::max);
    Witness { description, dimension: q.ncols(), basis: q, invariance_residual: res }
}

pub fn classify_representation(pv: &ParameterVector) -> Result<RepresentationReport> {
    let cls = pv.classify();
    let lam = pv.lambdas();
    let h = intersection_matrix_h(&cls, &lam)?;
    let ms = all_circuit_matrices(pv)?;
    let n = pv.m + 1;
    let some_integral = cls.r() + cls.s() > 0;
    let mut witnesses = Vec::new();

    if cls.s() > 0 {
        let mut w = CMat::zeros(n, cls.s());
        for (c, &i) in cls.polar.iter().enumerate() {
            w.set_column(c, &chain_coords(&cls, &lam, &h, &TwistedChain::loop_at(i, false))?.column(0));
        }
        let wt = witness(format!("loops around the dual-D sites {:?}", cls.polar), w, &ms);
        if wt.dimension > 0 && wt.dimension < n {
            witnesses.push(wt);
        }
    }
    // absolute cycles: gamma_j for j > r (non-integral case) or j >= r (integral case)
    let first = if cls.fully_integral() { cls.r() } else { cls.r() + 1 };
    if cls.r() > 0 && first <= n {
        let k = n + 1 - first;
        let w = CMat::from_fn(n, k, |i, j| if i == first - 1 + j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) });
        let wt = witness("absolute cycles H_1(T; L)".to_string(), w, &ms);
        if wt.dimension > 0 && wt.dimension < n {
            witnesses.push(wt);
        }
    }
    let dev = ms.iter().map(|c| max_abs(&(&c.m - identity(n)))).fold(0.0, f64::max);
    Ok(RepresentationReport {
        reducible: some_integral,
        trivial: cls.fully_integral() && (cls.r() == 1 || cls.r() == pv.m + 2),
        witnesses,
        max_deviation_from_identity: dev,
    })
}
