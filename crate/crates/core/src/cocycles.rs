//! Rational cocycles, the standard frames, the residue algorithm for the cohomology
//! intersection form, and the eigen-cocycle vectors of the residue matrices.

use std::collections::BTreeMap;

use crate::error::{domain, Error, Result};
use crate::linalg::{CMat, C64, TWO_PI_I};
use crate::parameters::{ParameterVector, PointConfiguration, SiteClass};

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

/// Truncated Laurent series sum_{n = start}^{start + len - 1} c_n z^n; terms of order
/// >= `end()` are unknown.
#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    pub start: i32,
    pub coeffs: Vec<C64>,
}

impl Series {
    pub fn zeros(start: i32, end: i32) -> Self {
        Series { start, coeffs: vec![zero(); (end - start).max(0) as usize] }
    }

    pub fn end(&self) -> i32 {
        self.start + self.coeffs.len() as i32
    }

    pub fn get(&self, n: i32) -> C64 {
        if n < self.start {
            return zero();
        }
        assert!(n < self.end(), "series coefficient {n} beyond precision {}", self.end());
        self.coeffs[(n - self.start) as usize]
    }

    fn add_at(&mut self, n: i32, v: C64) {
        if n >= self.start && n < self.end() {
            self.coeffs[(n - self.start) as usize] += v;
        }
    }

    pub fn mul(&self, o: &Series) -> Series {
        let start = self.start + o.start;
        let end = (self.end() + o.start).min(o.end() + self.start);
        let mut out = Series::zeros(start, end);
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                let n = start + (i + j) as i32;
                if n >= end {
                    break;
                }
                out.coeffs[i + j] += a * b;
            }
        }
        out
    }

    pub fn add(&self, o: &Series) -> Series {
        let start = self.start.min(o.start);
        let end = self.end().min(o.end());
        let mut out = Series::zeros(start, end);
        for n in start..end {
            out.coeffs[(n - start) as usize] = self.get(n) + o.get(n);
        }
        out
    }

    pub fn scale(&self, k: C64) -> Series {
        Series { start: self.start, coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    /// Multiplication by z^k.
    pub fn shift(&self, k: i32) -> Series {
        Series { start: self.start + k, coeffs: self.coeffs.clone() }
    }

    pub fn truncate(mut self, end: i32) -> Series {
        let len = (end - self.start).clamp(0, self.coeffs.len() as i32) as usize;
        self.coeffs.truncate(len);
        self
    }

    /// d/dz.
    pub fn deriv(&self) -> Series {
        let mut out = Series::zeros(self.start - 1, self.end() - 1);
        for n in self.start..self.end() {
            out.add_at(n - 1, self.get(n) * n as f64);
        }
        out
    }

    /// (1 + w z)^e for complex e.
    pub fn binomial(w: C64, e: C64, end: i32) -> Series {
        let mut out = Series::zeros(0, end.max(0));
        let mut term = one();
        for n in 0..end.max(0) {
            out.coeffs[n as usize] = term;
            term = term * (e - n as f64) / (n as f64 + 1.0) * w;
        }
        out
    }

    /// Residue (coefficient of z^{-1}).
    pub fn residue(&self) -> C64 {
        self.get(-1)
    }
}

/// Rational function sum c/(t - x_i)^k + sum p_n t^n with poles at finite sites
/// 0..=m+1 (x_0 = 0, x_{m+1} = 1).
#[derive(Clone, Debug, PartialEq, Default)]
pub struct RationalFunction {
    pub principal: BTreeMap<(usize, u32), C64>,
    pub poly: Vec<C64>,
}

/// A rational 1-form f(t) dt, stored through its coefficient f.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct RationalOneForm {
    pub principal: BTreeMap<(usize, u32), C64>,
    pub poly: Vec<C64>,
}

impl RationalFunction {
    pub fn constant(c: C64) -> Self {
        RationalFunction { principal: BTreeMap::new(), poly: vec![c] }
    }

    pub fn polynomial(p: Vec<C64>) -> Self {
        RationalFunction { principal: BTreeMap::new(), poly: p }.pruned()
    }

    /// c / (t - x_site)^order
    pub fn pole(site: usize, order: u32, c: C64) -> Self {
        let mut principal = BTreeMap::new();
        principal.insert((site, order), c);
        RationalFunction { principal, poly: vec![] }.pruned()
    }

    pub fn pruned(mut self) -> Self {
        self.principal.retain(|_, v| *v != zero());
        while self.poly.last() == Some(&zero()) {
            self.poly.pop();
        }
        self
    }

    pub fn plus(&self, o: &RationalFunction) -> RationalFunction {
        let mut out = self.clone();
        for (k, v) in &o.principal {
            *out.principal.entry(*k).or_insert(zero()) += v;
        }
        if out.poly.len() < o.poly.len() {
            out.poly.resize(o.poly.len(), zero());
        }
        for (i, v) in o.poly.iter().enumerate() {
            out.poly[i] += v;
        }
        out.pruned()
    }

    pub fn scale(&self, k: C64) -> RationalFunction {
        RationalFunction {
            principal: self.principal.iter().map(|(s, v)| (*s, v * k)).collect(),
            poly: self.poly.iter().map(|v| v * k).collect(),
        }
        .pruned()
    }

    pub fn eval(&self, pts: &[C64], t: C64) -> C64 {
        let mut acc = zero();
        for (&(site, k), c) in &self.principal {
            acc += c / (t - pts[site]).powi(k as i32);
        }
        let mut p = zero();
        for c in self.poly.iter().rev() {
            p = p * t + c;
        }
        acc + p
    }

    pub fn derivative(&self) -> RationalFunction {
        let mut principal = BTreeMap::new();
        for (&(site, k), c) in &self.principal {
            principal.insert((site, k + 1), -c * k as f64);
        }
        let poly = self.poly.iter().enumerate().skip(1).map(|(n, c)| c * n as f64).collect();
        RationalFunction { principal, poly }.pruned()
    }

    pub fn pole_order(&self, site: usize) -> u32 {
        self.principal.keys().filter(|(s, _)| *s == site).map(|(_, k)| *k).max().unwrap_or(0)
    }

    /// Growth exponent at infinity: f = O(t^g).
    fn growth(&self) -> i32 {
        if self.poly.is_empty() {
            -1
        } else {
            self.poly.len() as i32 - 1
        }
    }

    /// Lowest possible order of the expansion at `site` (`pts.len()` is infinity, in s = 1/t).
    pub fn local_start(&self, pts: &[C64], site: usize) -> i32 {
        if site == pts.len() {
            if !self.poly.is_empty() {
                -(self.poly.len() as i32 - 1)
            } else {
                self.principal.keys().map(|(_, k)| *k as i32).min().unwrap_or(0)
            }
        } else {
            -(self.pole_order(site) as i32)
        }
    }

    /// Laurent expansion at a finite site in z = t - x_site, or at infinity in s = 1/t.
    pub fn expand(&self, pts: &[C64], site: usize, end: i32) -> Series {
        let start = self.local_start(pts, site).min(end);
        let mut out = Series::zeros(start, end);
        if site == pts.len() {
            for (&(j, k), c) in &self.principal {
                let k = k as i32;
                // c s^k (1 - x_j s)^{-k}
                let b = Series::binomial(-pts[j], C64::new(-k as f64, 0.0), end - k);
                for n in 0..b.coeffs.len() as i32 {
                    out.add_at(k + n, c * b.coeffs[n as usize]);
                }
            }
            for (p, c) in self.poly.iter().enumerate() {
                out.add_at(-(p as i32), *c);
            }
        } else {
            let xk = pts[site];
            for (&(j, k), c) in &self.principal {
                let k = k as i32;
                if j == site {
                    out.add_at(-k, *c);
                } else {
                    let d = xk - pts[j];
                    let b = Series::binomial(d.inv(), C64::new(-k as f64, 0.0), end);
                    let dk = d.powi(-k);
                    for n in 0..b.coeffs.len() as i32 {
                        out.add_at(n, c * dk * b.coeffs[n as usize]);
                    }
                }
            }
            for (p, c) in self.poly.iter().enumerate() {
                let b = Series::binomial(one(), C64::new(p as f64, 0.0), (p as i32 + 1).min(end));
                // (x_k + z)^p = sum binom(p, n) x_k^{p-n} z^n
                for n in 0..b.coeffs.len() as i32 {
                    out.add_at(n, c * b.coeffs[n as usize] * xk.powi(p as i32 - n));
                }
            }
        }
        out
    }

    /// Reassembles a rational function from its local expansions, given bounds on the
    /// pole orders at the finite sites and on the growth at infinity.
    pub fn from_expansions(
        pts: &[C64],
        pole_orders: &[u32],
        growth: i32,
        expand: impl Fn(usize, i32) -> Series,
    ) -> RationalFunction {
        let mut principal = BTreeMap::new();
        for (site, &ord) in pole_orders.iter().enumerate() {
            if ord == 0 {
                continue;
            }
            let s = expand(site, 0);
            for k in 1..=ord {
                principal.insert((site, k), s.get(-(k as i32)));
            }
        }
        let mut poly = Vec::new();
        if growth >= 0 {
            let s = expand(pts.len(), 1);
            for p in 0..=growth {
                poly.push(s.get(-p));
            }
        }
        let mut rf = RationalFunction { principal, poly };
        let scale = rf.principal.values().chain(rf.poly.iter()).map(|c| c.norm()).fold(0.0, f64::max);
        rf.principal.retain(|_, v| v.norm() > 1e-14 * scale);
        for v in rf.poly.iter_mut() {
            if v.norm() <= 1e-14 * scale {
                *v = zero();
            }
        }
        rf.pruned()
    }

    pub fn mul(&self, o: &RationalFunction, pts: &[C64]) -> RationalFunction {
        let orders: Vec<u32> = (0..pts.len()).map(|k| self.pole_order(k) + o.pole_order(k)).collect();
        let growth = self.growth() + o.growth();
        RationalFunction::from_expansions(pts, &orders, growth, |site, end| {
            let a = self.expand(pts, site, end - o.local_start(pts, site));
            let b = o.expand(pts, site, end - self.local_start(pts, site));
            a.mul(&b).truncate(end)
        })
    }
}

impl RationalOneForm {
    pub fn from_coefficient(f: RationalFunction) -> Self {
        RationalOneForm { principal: f.principal, poly: f.poly }
    }

    pub fn coefficient(&self) -> RationalFunction {
        RationalFunction { principal: self.principal.clone(), poly: self.poly.clone() }
    }

    /// c dt/(t - x_site)^order
    pub fn pole(site: usize, order: u32, c: C64) -> Self {
        Self::from_coefficient(RationalFunction::pole(site, order, c))
    }

    pub fn plus(&self, o: &RationalOneForm) -> RationalOneForm {
        Self::from_coefficient(self.coefficient().plus(&o.coefficient()))
    }

    pub fn scale(&self, k: C64) -> RationalOneForm {
        Self::from_coefficient(self.coefficient().scale(k))
    }

    pub fn is_zero(&self) -> bool {
        self.principal.values().all(|v| *v == zero()) && self.poly.iter().all(|v| *v == zero())
    }

    /// Coefficient of dt at t.
    pub fn eval(&self, pts: &[C64], t: C64) -> C64 {
        self.coefficient().eval(pts, t)
    }

    /// Lowest order of the local expansion as a form (coefficient of dz, or of ds at infinity).
    pub fn local_start(&self, pts: &[C64], site: usize) -> i32 {
        let s = self.coefficient().local_start(pts, site);
        if site == pts.len() {
            s - 2
        } else {
            s
        }
    }

    /// Actual order of vanishing at a site, ignoring cancelled leading terms
    /// (relative threshold 1e-13); `i32::MAX` for the zero form.
    pub fn local_order(&self, pts: &[C64], site: usize) -> i32 {
        let start = self.local_start(pts, site);
        let s = self.expand(pts, site, start + 64);
        let scale = self.principal.values().chain(self.poly.iter()).map(|c| c.norm()).fold(0.0, f64::max);
        s.coeffs
            .iter()
            .position(|c| c.norm() > 1e-13 * scale)
            .map_or(i32::MAX, |k| start + k as i32)
    }

    /// Local expansion of the form; at infinity dt = -ds/s^2 is applied.
    pub fn expand(&self, pts: &[C64], site: usize, end: i32) -> Series {
        if site == pts.len() {
            self.coefficient().expand(pts, site, end + 2).shift(-2).scale(-one())
        } else {
            self.coefficient().expand(pts, site, end)
        }
    }
}

/// omega = d log u = sum_{i <= m+1} alpha_i dt/(t - x_i).
pub fn omega(pv: &ParameterVector) -> RationalOneForm {
    let a = pv.alpha();
    let mut principal = BTreeMap::new();
    for (i, ai) in a.iter().enumerate().take(pv.m + 2) {
        principal.insert((i, 1), *ai);
    }
    RationalOneForm { principal, poly: vec![] }.pruned_form()
}

impl RationalOneForm {
    fn pruned_form(self) -> Self {
        Self::from_coefficient(self.coefficient().pruned())
    }
}

/// nabla_t f = df + f omega.
pub fn nabla(f: &RationalFunction, pv: &ParameterVector, pts: &[C64]) -> RationalOneForm {
    let w = omega(pv).coefficient();
    RationalOneForm::from_coefficient(f.derivative().plus(&f.mul(&w, pts)))
}

/// nabla^dual_t g = dg - g omega.
pub fn nabla_dual(g: &RationalFunction, pv: &ParameterVector, pts: &[C64]) -> RationalOneForm {
    let w = omega(pv).coefficient();
    RationalOneForm::from_coefficient(g.derivative().plus(&g.mul(&w, pts).scale(-one())))
}

/// scale * prod (t - x_j)^{e_j} over finite sites.
#[derive(Clone, Debug, PartialEq)]
pub struct FactoredRational {
    pub scale: C64,
    pub factors: Vec<(usize, i64)>,
}

impl FactoredRational {
    pub fn expand(&self, pts: &[C64], site: usize, end: i32) -> Series {
        let mut prec_start = 0;
        for &(j, e) in &self.factors {
            if site == pts.len() {
                prec_start -= e as i32;
            } else if j == site {
                prec_start += e as i32;
            }
        }
        let len = end - prec_start;
        let mut acc = Series::binomial(zero(), zero(), len).scale(self.scale);
        for &(j, e) in &self.factors {
            let f = if site == pts.len() {
                Series::binomial(-pts[j], C64::new(e as f64, 0.0), len).shift(-e as i32)
            } else if j == site {
                let mut s = Series::zeros(e as i32, e as i32 + len);
                s.coeffs[0] = one();
                s
            } else {
                let d = pts[site] - pts[j];
                Series::binomial(d.inv(), C64::new(e as f64, 0.0), len).scale(d.powi(e as i32))
            };
            acc = acc.mul(&f);
        }
        acc.truncate(end)
    }

    pub fn to_rational(&self, pts: &[C64]) -> RationalFunction {
        let mut orders = vec![0u32; pts.len()];
        let mut growth = 0i32;
        for &(j, e) in &self.factors {
            if e < 0 {
                orders[j] += (-e) as u32;
            }
            growth += e as i32;
        }
        RationalFunction::from_expansions(pts, &orders, growth, |site, end| self.expand(pts, site, end))
    }
}

/// The frames phi_{i,m+2} (i = 0..=m+1) and psi_{0,i} (i = 1..=m+2) with their linear relations.
#[derive(Clone, Debug)]
pub struct Frames {
    /// phi[i] = phi_{i,m+2}, i = 0..=m+1.
    pub phi: Vec<RationalOneForm>,
    /// psi[i-1] = psi_{0,i}, i = 1..=m+2.
    pub psi: Vec<RationalOneForm>,
    /// Coordinates of phi_{0,m+2} in (phi_{1,m+2}, .., phi_{m+1,m+2}).
    pub phi_relation: Vec<C64>,
    /// Coordinates of psi_{0,m+2} in (psi_{0,1}, .., psi_{0,m+1}).
    pub psi_relation: Vec<C64>,
}

fn exact_zero(pv: &ParameterVector, i: usize) -> Result<bool> {
    let e = &pv.entries[i];
    if e.is_exact() {
        return Ok(e.is_zero());
    }
    if e.value().norm() < 1e-13 {
        return domain(format!("alpha_{i} is a floating zero; supply it as an exact rational"));
    }
    Ok(false)
}

pub fn frames(pv: &ParameterVector, x: &PointConfiguration) -> Result<Frames> {
    let m = pv.m;
    if x.m != m {
        return Err(Error::Malformed(format!("configuration has m={}, parameters have m={m}", x.m)));
    }
    let cls = pv.classify();
    let pts = x.finite_sites();
    let a = pv.alpha();
    let mut phi = Vec::with_capacity(m + 2);
    for i in 0..=m {
        if exact_zero(pv, i)? {
            // minus nabla of prod_{j in N0, j != i} ((t - x_j)/(x_i - x_j))^{1 - alpha_j}
            let mut scale = one();
            let mut factors = Vec::new();
            for &j in cls.holomorphic.iter().filter(|&&j| j != i && j <= m + 1) {
                let e = 1 - pv.entries[j].as_integer().expect("holomorphic sites are exact integers");
                scale /= (pts[i] - pts[j]).powi(e as i32);
                factors.push((j, e));
            }
            // u F must also vanish at infinity when infinity is in D; push the excess
            // growth into a pole at a finite site outside D
            if let Some(a_inf) = pv.order(m + 2).filter(|&o| o >= 0).map(|_| pv.entries[m + 2].as_integer().unwrap()) {
                let growth: i64 = factors.iter().map(|&(_, e)| e).sum();
                let k = growth - a_inf + 1;
                if k > 0 {
                    let cpt = (0..=m + 1)
                        .find(|&j| cls.class_of(j) != SiteClass::Holomorphic)
                        .ok_or_else(|| Error::Domain("every finite site is in D".into()))?;
                    scale *= (pts[i] - pts[cpt]).powi(k as i32);
                    factors.push((cpt, -k));
                }
            }
            let f = FactoredRational { scale, factors }.to_rational(&pts);
            phi.push(nabla(&f, pv, &pts).scale(-one()));
        } else {
            phi.push(RationalOneForm::pole(i, 1, a[i]));
        }
    }
    phi.push(RationalOneForm::pole(m + 1, 1, one()));

    let mut psi = Vec::with_capacity(m + 2);
    for i in 1..=m {
        psi.push(RationalOneForm::pole(i, 1, one()).plus(&RationalOneForm::pole(0, 1, -one())));
    }
    let z1 = exact_zero(pv, m + 1)?;
    let z2 = exact_zero(pv, m + 2)?;
    let minus_omega = omega(pv).scale(-one());
    let both = || -> Result<usize> {
        (0..=m)
            .find(|&j| cls.class_of(j) != SiteClass::Polar)
            .ok_or_else(|| Error::Domain("no finite site outside the dual D below x_{m+1}".into()))
    };
    psi.push(if !z1 {
        RationalOneForm::pole(m + 1, 1, a[m + 1]).plus(&RationalOneForm::pole(0, 1, -a[m + 1]))
    } else if !z2 {
        minus_omega.clone()
    } else {
        let j = both()?;
        nabla_dual(&RationalFunction::pole(j, 1, one() - pts[j]), pv, &pts)
    });
    psi.push(if !z2 {
        RationalOneForm::pole(0, 1, -a[m + 2])
    } else if !z1 {
        minus_omega
    } else {
        let j = both()?;
        let g = RationalFunction::constant(one()).plus(&RationalFunction::pole(j, 1, pts[j] - one()));
        nabla_dual(&g, pv, &pts)
    });

    let mut phi_relation = vec![-one(); m + 1];
    phi_relation[m] = -a[m + 1];
    let mut psi_relation: Vec<C64> = (1..=m).map(|i| -a[i]).collect();
    psi_relation.push(-one());
    Ok(Frames { phi, psi, phi_relation, psi_relation })
}

/// Local exponent of u at a site (in z, or in s = 1/t at infinity).
fn local_exponent(pv: &ParameterVector, site: usize) -> C64 {
    pv.alpha()[site]
}

/// Local solution of nabla f = phi (or nabla^dual g = psi when `dual`) at a site,
/// the one with u f (resp. g/u) vanishing at the site; coefficients up to order `end`.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalSeries {
    pub site: usize,
    pub dual: bool,
    pub series: Series,
}

pub fn local_series_solve(
    form: &RationalOneForm,
    site: usize,
    dual: bool,
    end: i32,
    pv: &ParameterVector,
    pts: &[C64],
) -> Result<LocalSeries> {
    let alpha = local_exponent(pv, site);
    let resonant = pv.entries[site].as_integer();
    let ord = form.local_order(pts, site);
    if ord == i32::MAX {
        return Ok(LocalSeries { site, dual, series: Series::zeros(end, end) });
    }
    let k0 = ord + 1;
    let phi = form.expand(pts, site, end.max(k0));
    let w = omega(pv).expand(pts, site, (end - k0).max(1));
    let sign = if dual { -one() } else { one() };
    let mut f = Series::zeros(k0, end.max(k0));
    let scale = phi.coeffs.iter().map(|c| c.norm()).fold(1.0, f64::max);
    for n in k0..end {
        let mut rhs = phi.get(n - 1);
        for j in k0..n {
            rhs -= sign * f.get(j) * w.get(n - 1 - j);
        }
        let denom = C64::new(n as f64, 0.0) + sign * alpha;
        let is_resonant = matches!(resonant, Some(k) if (if dual { k } else { -k }) == n as i64);
        f.coeffs[(n - k0) as usize] = if is_resonant {
            if rhs.norm() > 1e-9 * scale {
                return domain(format!(
                    "unresolvable resonance at site {site}, order {n}: the form is not admissible there"
                ));
            }
            zero()
        } else {
            rhs / denom
        };
    }
    Ok(LocalSeries { site, dual, series: f })
}

/// Checks ord(u phi) >= 0 on D (u side) or ord(psi/u) >= 0 on the dual D.
pub fn check_admissible(form: &RationalOneForm, dual: bool, pv: &ParameterVector, pts: &[C64]) -> Result<()> {
    let cls = pv.classify();
    let sites = if dual { &cls.polar } else { &cls.holomorphic };
    for &k in sites {
        let e = pv.entries[k].as_integer().unwrap();
        let ord = form.local_order(pts, k) as i64 + if dual { -e } else { e };
        if ord < 0 {
            return domain(format!(
                "form has order {ord} at site {k} after {} u; not in the {} complex",
                if dual { "dividing by" } else { "multiplying by" },
                if dual { "dual" } else { "u-side" }
            ));
        }
    }
    Ok(())
}

fn site_residue(
    solve_form: &RationalOneForm,
    other: &RationalOneForm,
    site: usize,
    dual: bool,
    extra: i32,
    pv: &ParameterVector,
    pts: &[C64],
) -> Result<C64> {
    let lo = other.local_order(pts, site);
    if lo == i32::MAX {
        return Ok(zero());
    }
    // the other factor's expansion starts at its structural order, which can sit below `lo`
    let end = -other.local_start(pts, site).min(lo) + extra;
    let f = local_series_solve(solve_form, site, dual, end, pv, pts)?.series;
    if f.start >= end {
        return Ok(zero());
    }
    let o = other.expand(pts, site, -f.start);
    Ok(f.mul(&o).truncate(0).get(-1))
}

/// Residue of f psi (or g phi) at a site, with a truncation drift check.
fn checked_residue(
    solve_form: &RationalOneForm,
    other: &RationalOneForm,
    site: usize,
    dual: bool,
    pv: &ParameterVector,
    pts: &[C64],
) -> Result<C64> {
    let mut extra = 0;
    let mut prev = site_residue(solve_form, other, site, dual, extra, pv, pts)?;
    for _ in 0..4 {
        extra = 2 * extra + 4;
        let next = site_residue(solve_form, other, site, dual, extra, pv, pts)?;
        if (next - prev).norm() <= 1e-13 * next.norm().max(1.0) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::Numerical(format!("residue at site {site} does not stabilize under truncation")))
}

/// The cohomology intersection number I_c(phi, psi) by the residue formula.
pub fn residue_pairing(phi: &RationalOneForm, psi: &RationalOneForm, pv: &ParameterVector, x: &PointConfiguration) -> Result<C64> {
    let pts = x.finite_sites();
    check_admissible(phi, false, pv, &pts)?;
    check_admissible(psi, true, pv, &pts)?;
    let cls = pv.classify();
    let mut acc = zero();
    for site in 0..cls.n_sites() {
        match cls.class_of(site) {
            SiteClass::Holomorphic => acc += checked_residue(phi, psi, site, false, pv, &pts)?,
            SiteClass::Polar => acc -= checked_residue(psi, phi, site, true, pv, &pts)?,
            SiteClass::Nonintegral => {
                let a = checked_residue(phi, psi, site, false, pv, &pts)?;
                let b = checked_residue(psi, phi, site, true, pv, &pts)?;
                acc += (a - b) * 0.5;
            }
        }
    }
    Ok(TWO_PI_I * acc)
}

/// Single-sum variant: on non-integral sites use only the u-side solution (`dual = false`)
/// or only the dual one (`dual = true`).
pub fn residue_pairing_one_sided(
    phi: &RationalOneForm,
    psi: &RationalOneForm,
    pv: &ParameterVector,
    x: &PointConfiguration,
    dual: bool,
) -> Result<C64> {
    let pts = x.finite_sites();
    let cls = pv.classify();
    let mut acc = zero();
    for site in 0..cls.n_sites() {
        let use_dual = match cls.class_of(site) {
            SiteClass::Holomorphic => false,
            SiteClass::Polar => true,
            SiteClass::Nonintegral => dual,
        };
        if use_dual {
            acc -= checked_residue(psi, phi, site, true, pv, &pts)?;
        } else {
            acc += checked_residue(phi, psi, site, false, pv, &pts)?;
        }
    }
    Ok(TWO_PI_I * acc)
}

/// Matrix C_{ij} = I_c(phi_i, psi_j).
pub fn cohomology_matrix(phis: &[RationalOneForm], psis: &[RationalOneForm], pv: &ParameterVector, x: &PointConfiguration) -> Result<CMat> {
    let mut c = CMat::zeros(phis.len(), psis.len());
    for (i, p) in phis.iter().enumerate() {
        for (j, q) in psis.iter().enumerate() {
            c[(i, j)] = residue_pairing(p, q, pv, x)?;
        }
    }
    Ok(c)
}

/// Frames of the standard pairing: (phi_{1,m+2}..phi_{m+1,m+2}) and (psi_{0,1}..psi_{0,m+1}).
pub fn standard_frames(pv: &ParameterVector, x: &PointConfiguration) -> Result<(Vec<RationalOneForm>, Vec<RationalOneForm>)> {
    let f = frames(pv, x)?;
    let m = pv.m;
    Ok((f.phi[1..=m + 1].to_vec(), f.psi[..=m].to_vec()))
}

/// v_{i,j} (row) and w_{i,j} (column) with R_{i,j} = -w_{i,j} v_{i,j}.
pub fn eigen_cocycles(i: usize, j: usize, pv: &ParameterVector) -> Result<(Vec<C64>, Vec<C64>)> {
    let m = pv.m;
    if i == j || i > m + 1 || j > m + 1 {
        return domain(format!("({i}, {j}) is not a pair of distinct indices in 0..=m+1"));
    }
    if i > j {
        let (v, w) = eigen_cocycles(j, i, pv)?;
        return Ok((v.iter().map(|c| -c).collect(), w.iter().map(|c| -c).collect()));
    }
    if i == 0 && j == m + 1 {
        return domain("the pair (0, m+1) carries no residue matrix: dx_0 = dx_{m+1} = 0");
    }
    let a = pv.alpha();
    let n = m + 1;
    let e = |k: usize| -> Vec<C64> {
        let mut v = vec![zero(); n];
        v[k - 1] = one();
        v
    };
    let mut e0 = vec![-one(); n];
    e0[m] = -a[m + 1];
    let lin = |p: C64, u: &[C64], q: C64, w: &[C64]| -> Vec<C64> {
        u.iter().zip(w).map(|(x, y)| p * x + q * y).collect()
    };
    if i == 0 {
        // the listed pair is (j, 0)
        let v = lin(a[0], &e(j), -a[j], &e0);
        let w = e(j).iter().map(|c| -c).collect::<Vec<_>>();
        return Ok((v.iter().map(|c| -c).collect(), w.iter().map(|c| -c).collect()));
    }
    if j == m + 1 {
        return Ok((lin(one(), &e(i), -a[i], &e(m + 1)), lin(one(), &e(m + 1), -a[m + 1], &e(i))));
    }
    Ok((lin(a[j], &e(i), -a[i], &e(j)), lin(one(), &e(j), -one(), &e(i))))
}
