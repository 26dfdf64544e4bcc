//! Twisted periods by branch-tracked quadrature over the elementary chains,
//! and the period matrices of a pair of bases.

use std::f64::consts::PI;

use serde::Serialize;

use super::quadrature::{integrate, QuadratureResult, DEFAULT_PANEL_CAP};
use crate::chains::{bases, ChainKind, Elementary, TwistedChain};
use crate::cocycles::{check_admissible, RationalOneForm};
use crate::error::{domain, Result};
use crate::linalg::{c, CMat, C64, I};
use crate::parameters::{ParameterVector, PointConfiguration};

/// Geometry shared by all chains at one configuration: base point, loop radius,
/// the radius of the circle around infinity.
#[derive(Clone, Debug)]
pub struct PeriodSetup {
    pub pv: ParameterVector,
    /// Finite sites 0, x_1, .., x_m, 1 (all real).
    pub pts: Vec<C64>,
    pub alpha: Vec<C64>,
    pub lambda: Vec<C64>,
    pub base: C64,
    pub eps: f64,
    pub r_inf: f64,
    pub tol: f64,
    pub cap: usize,
}

#[derive(Clone, Copy, Debug)]
enum Piece {
    Segment(C64, C64),
    Circle { site: usize, theta0: f64 },
    CircleAtInfinity { theta0: f64 },
    RayToInfinity,
}

fn windowed_arg(z: C64) -> f64 {
    let a = z.arg();
    if a < -PI / 2.0 {
        a + 2.0 * PI
    } else {
        a
    }
}

impl PeriodSetup {
    /// Default geometry: base point center + i max(1, half width), radius a quarter of the minimal gap.
    pub fn new(pv: &ParameterVector, x: &PointConfiguration, tol: f64) -> Result<Self> {
        if !(tol > 0.0) {
            return crate::error::malformed("tolerance must be positive");
        }
        if x.m != pv.m {
            return crate::error::malformed(format!("configuration has m={}, parameters have m={}", x.m, pv.m));
        }
        let x = if x.aligned { x.clone() } else { x.clone().align_to(&pv.classify())? };
        let pts = x.finite_sites();
        let lo = pts.iter().map(|p| p.re).fold(f64::INFINITY, f64::min);
        let hi = pts.iter().map(|p| p.re).fold(f64::NEG_INFINITY, f64::max);
        let half = 0.5 * (hi - lo);
        let base = c(0.5 * (lo + hi), half.max(1.0));
        let far = pts.iter().map(|p| p.norm()).fold(1.0f64, f64::max).max(base.norm());
        Ok(PeriodSetup {
            pv: pv.clone(),
            alpha: pv.alpha(),
            lambda: pv.lambdas(),
            eps: 0.25 * x.min_gap(),
            r_inf: 4.0 * far,
            pts,
            base,
            tol,
            cap: DEFAULT_PANEL_CAP,
        })
    }

    /// Moves the base point; it must stay in the open upper half plane.
    pub fn with_base(mut self, base: C64) -> Result<Self> {
        if !(base.im > 0.0) {
            return domain("the base point must lie in the upper half plane");
        }
        self.base = base;
        let far = self.pts.iter().map(|p| p.norm()).fold(1.0f64, f64::max).max(base.norm());
        self.r_inf = 4.0 * far;
        Ok(self)
    }

    pub fn with_eps(mut self, eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps < 0.5 * self.min_gap()) {
            return domain("loop radius must be positive and below half the minimal gap");
        }
        self.eps = eps;
        Ok(self)
    }

    fn min_gap(&self) -> f64 {
        let mut g = f64::INFINITY;
        for i in 0..self.pts.len() {
            for j in 0..i {
                g = g.min((self.pts[i] - self.pts[j]).norm());
            }
        }
        g
    }

    fn inf(&self) -> usize {
        self.pts.len()
    }

    /// log u with the given argument for each factor t - x_i.
    fn log_u(&self, t: C64, args: &[f64]) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for (i, p) in self.pts.iter().enumerate() {
            acc += self.alpha[i] * c((t - p).norm().ln(), args[i]);
        }
        acc
    }

    /// Point, dt/dtau and the branch of arg(t - x_i) at tau in [0, 1].
    fn locate(&self, piece: Piece, tau: f64, args: &mut [f64]) -> (C64, C64) {
        match piece {
            Piece::Segment(a, b) => {
                let t = a + (b - a) * tau;
                for (i, p) in self.pts.iter().enumerate() {
                    args[i] = (t - p).arg();
                }
                (t, b - a)
            }
            Piece::Circle { site, theta0 } => {
                let th = theta0 + 2.0 * PI * tau;
                let e = C64::from_polar(self.eps, th);
                let t = self.pts[site] + e;
                for (i, p) in self.pts.iter().enumerate() {
                    args[i] = if i == site { th } else { windowed_arg(t - p) };
                }
                (t, I * e * (2.0 * PI))
            }
            Piece::CircleAtInfinity { theta0 } => {
                let th = theta0 + 2.0 * PI * tau;
                let t = C64::from_polar(self.r_inf, -th);
                for (i, p) in self.pts.iter().enumerate() {
                    args[i] = -th + (1.0 - p / t).arg();
                }
                (t, -I * t * (2.0 * PI))
            }
            Piece::RayToInfinity => {
                let s = 1.0 - tau;
                let t = self.base / s;
                for (i, p) in self.pts.iter().enumerate() {
                    args[i] = (t - p).arg();
                }
                (t, self.base / (s * s))
            }
        }
    }

    fn piece_integral(&self, piece: Piece, form: &RationalOneForm, dual: bool, tol: f64) -> Result<QuadratureResult> {
        let sign = if dual { -1.0 } else { 1.0 };
        let f = |tau: f64| {
            let mut args = vec![0.0; self.pts.len()];
            let (t, dt) = self.locate(piece, tau, &mut args);
            (self.log_u(t, &args) * sign).exp() * form.eval(&self.pts, t) * dt
        };
        integrate(f, 0.0, 1.0, tol, self.cap)
    }

    fn pieces(&self, e: Elementary) -> Vec<(C64, Piece)> {
        let one = c(1.0, 0.0);
        let inf = self.inf();
        match (e.kind, e.site == inf) {
            (ChainKind::Path, false) => vec![(one, Piece::Segment(self.base, self.pts[e.site]))],
            (ChainKind::Path, true) => vec![(one, Piece::RayToInfinity)],
            (ChainKind::Loop, false) => {
                let theta0 = (self.base - self.pts[e.site]).arg();
                let start = self.pts[e.site] + C64::from_polar(self.eps, theta0);
                vec![(c(1.0, 0.0), Piece::Segment(self.base, start)), (one, Piece::Circle { site: e.site, theta0 })]
            }
            (ChainKind::Loop, true) => {
                let far = self.base / self.base.norm() * self.r_inf;
                vec![(one, Piece::Segment(self.base, far)), (one, Piece::CircleAtInfinity { theta0: -self.base.arg() })]
            }
        }
    }

    /// Integral of u form (or form / u when `dual`) over one elementary chain.
    pub fn elementary(&self, e: Elementary, form: &RationalOneForm, dual: bool) -> Result<QuadratureResult> {
        let pieces = self.pieces(e);
        let tol = self.tol / pieces.len() as f64;
        let lam = if dual { self.lambda[e.site].inv() } else { self.lambda[e.site] };
        let mut out = QuadratureResult::zero();
        for (k, (w, piece)) in pieces.into_iter().enumerate() {
            let mut r = self.piece_integral(piece, form, dual, tol)?.scaled(w);
            if e.kind == ChainKind::Loop && k == 0 {
                // outgoing leg minus the returning leg on the continued branch
                r = r.scaled(c(1.0, 0.0) - lam);
            }
            out = out.plus(r);
        }
        Ok(out)
    }

    /// Integral over a loaded chain; paths and the form are checked against the classification.
    pub fn chain(&self, form: &RationalOneForm, chain: &TwistedChain) -> Result<QuadratureResult> {
        let cls = self.pv.classify();
        chain.check_sites(&cls)?;
        check_admissible(form, chain.dual, &self.pv, &self.pts)?;
        let mut out = QuadratureResult::zero();
        for (e, k) in &chain.terms {
            out = out.plus(self.elementary(*e, form, chain.dual)?.scaled(*k));
        }
        Ok(out)
    }

    /// Largest deviation between the closed-form branch used on the loop at `site`
    /// and log u continued step by step along the same loop, together with the
    /// deviation of the total change from 2 pi i alpha_site.
    pub fn branch_consistency(&self, site: usize, steps: usize) -> (f64, f64) {
        let e = Elementary { kind: ChainKind::Loop, site };
        let pieces = self.pieces(e);
        let mut args = vec![0.0; self.pts.len()];
        let mut prev: Option<C64> = None;
        let mut tracked = C64::new(0.0, 0.0);
        let mut worst = 0.0f64;
        for (_, piece) in &pieces {
            for k in 0..=steps {
                let tau = k as f64 / steps as f64;
                let (t, _) = self.locate(*piece, tau, &mut args);
                let lu = self.log_u(t, &args);
                match prev {
                    None => tracked = lu,
                    Some(pt) => {
                        for (i, p) in self.pts.iter().enumerate() {
                            tracked += self.alpha[i] * ((t - p) / (pt - p)).ln();
                        }
                    }
                }
                worst = worst.max((tracked - lu).norm());
                prev = Some(t);
            }
        }
        // walk back along the outgoing leg on the continued branch
        let start = match pieces[0].1 {
            Piece::Segment(a, _) => a,
            _ => unreachable!(),
        };
        let last = prev.unwrap();
        let mut pt = last;
        for _ in 0..steps {
            let t = pt + (start - last) / steps as f64;
            for (i, p) in self.pts.iter().enumerate() {
                tracked += self.alpha[i] * ((t - p) / (pt - p)).ln();
            }
            pt = t;
        }
        let mut args0 = vec![0.0; self.pts.len()];
        for (i, p) in self.pts.iter().enumerate() {
            args0[i] = (start - p).arg();
        }
        let jump = tracked - self.log_u(start, &args0);
        (worst, (jump - crate::linalg::TWO_PI_I * self.alpha[site]).norm())
    }
}

pub fn period(form: &RationalOneForm, chain: &TwistedChain, pv: &ParameterVector, x: &PointConfiguration, tol: f64) -> Result<QuadratureResult> {
    PeriodSetup::new(pv, x, tol)?.chain(form, chain)
}

#[derive(Clone, Debug, Serialize)]
pub struct PeriodMatrices {
    /// Phi_{ij} = <phi_i, gamma_j>
    #[serde(skip)]
    pub phi: CMat,
    /// Psi_{ij} = <delta_i, psi_j>
    #[serde(skip)]
    pub psi: CMat,
    pub phi_error: Vec<Vec<f64>>,
    pub psi_error: Vec<Vec<f64>>,
    pub gamma: Vec<String>,
    pub delta: Vec<String>,
    pub panels: usize,
}

pub fn describe_chain(ch: &TwistedChain) -> String {
    let mut parts = Vec::new();
    for (e, k) in &ch.terms {
        let kind = match e.kind {
            ChainKind::Path => "path",
            ChainKind::Loop => "loop",
        };
        parts.push(format!("({:.6}{:+.6}i) {kind}[{}]", k.re, k.im, e.site));
    }
    format!("{}{}", if ch.dual { "1/u: " } else { "u: " }, parts.join(" + "))
}

/// Period matrices of given cocycle lists against the given chain lists.
pub fn period_matrices_for(
    setup: &PeriodSetup,
    phis: &[RationalOneForm],
    gammas: &[TwistedChain],
    deltas: &[TwistedChain],
    psis: &[RationalOneForm],
) -> Result<PeriodMatrices> {
    let (n1, n2) = (phis.len(), gammas.len());
    let mut phi = CMat::zeros(n1, n2);
    let mut phi_error = vec![vec![0.0; n2]; n1];
    let mut panels = 0;
    for i in 0..n1 {
        for j in 0..n2 {
            let r = setup.chain(&phis[i], &gammas[j])?;
            phi[(i, j)] = r.value;
            phi_error[i][j] = r.error_estimate;
            panels += r.panels;
        }
    }
    let (n3, n4) = (deltas.len(), psis.len());
    let mut psi = CMat::zeros(n3, n4);
    let mut psi_error = vec![vec![0.0; n4]; n3];
    for i in 0..n3 {
        for j in 0..n4 {
            let r = setup.chain(&psis[j], &deltas[i])?;
            psi[(i, j)] = r.value;
            psi_error[i][j] = r.error_estimate;
            panels += r.panels;
        }
    }
    Ok(PeriodMatrices {
        phi,
        psi,
        phi_error,
        psi_error,
        gamma: gammas.iter().map(describe_chain).collect(),
        delta: deltas.iter().map(describe_chain).collect(),
        panels,
    })
}

/// Period matrices of the given cocycles against the standard chain bases.
pub fn period_matrices(
    pv: &ParameterVector,
    x: &PointConfiguration,
    phis: &[RationalOneForm],
    psis: &[RationalOneForm],
    tol: f64,
) -> Result<PeriodMatrices> {
    let setup = PeriodSetup::new(pv, x, tol)?;
    let b = bases(&pv.classify(), &pv.lambdas())?;
    period_matrices_for(&setup, phis, &b.gamma, &b.delta, psis)
}
