//! Exponent vectors, index classification and aligned point configurations.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use serde::Serialize;

use crate::error::{domain, malformed, Result};
use crate::linalg::{c, C64, TWO_PI_I};

/// A parameter entry: exact rational or floating complex.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(Rational64),
    Float(C64),
}

impl Scalar {
    pub fn int(n: i64) -> Self {
        Scalar::Exact(Rational64::from_integer(n))
    }

    pub fn ratio(p: i64, q: i64) -> Self {
        Scalar::Exact(Rational64::new(p, q))
    }

    pub fn real(x: f64) -> Self {
        Scalar::Float(c(x, 0.0))
    }

    pub fn complex(re: f64, im: f64) -> Self {
        Scalar::Float(c(re, im))
    }

    pub fn value(&self) -> C64 {
        match self {
            Scalar::Exact(r) => c(r.to_f64().unwrap_or(f64::NAN), 0.0),
            Scalar::Float(z) => *z,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    /// The integer value, only for exact integral entries.
    pub fn as_integer(&self) -> Option<i64> {
        match self {
            Scalar::Exact(r) if r.is_integer() => Some(r.to_integer()),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Float(z) => *z == C64::new(0.0, 0.0),
        }
    }

    /// Parse "p/q" or an integer literal into an exact rational.
    pub fn parse_exact(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse = |t: &str| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| crate::error::Error::Malformed(format!("bad rational {s:?}")))
        };
        match s.split_once('/') {
            Some((p, q)) => {
                let (p, q) = (parse(p)?, parse(q)?);
                if q == 0 {
                    return malformed(format!("zero denominator in {s:?}"));
                }
                Ok(Scalar::ratio(p, q))
            }
            None => Ok(Scalar::int(parse(s)?)),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Scalar::Float(z) => write!(f, "{}{:+}i", z.re, z.im),
        }
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, o: Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a + b),
            (a, b) => Scalar::Float(a.value() + b.value()),
        }
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, o: Scalar) -> Scalar {
        self + (-o)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(a) => Scalar::Exact(-a),
            Scalar::Float(z) => Scalar::Float(-z),
        }
    }
}

/// The exponents alpha_0..alpha_{m+2} of u(t) at 0, x_1..x_m, 1, infinity.
#[derive(Clone, Debug, PartialEq)]
pub struct ParameterVector {
    pub m: usize,
    pub entries: Vec<Scalar>,
}

impl ParameterVector {
    /// alpha = (sum b - c, -b_1, .., -b_m, c - a, a).
    pub fn from_abc(a: Scalar, b: Vec<Scalar>, cc: Scalar) -> Result<Self> {
        let m = b.len();
        if m == 0 {
            return malformed("need at least one b parameter");
        }
        let sum_b = b.iter().cloned().fold(Scalar::int(0), |acc, x| acc + x);
        let mut entries = Vec::with_capacity(m + 3);
        entries.push(sum_b - cc.clone());
        entries.extend(b.into_iter().map(|x| -x));
        entries.push(cc - a.clone());
        entries.push(a);
        Ok(ParameterVector { m, entries })
    }

    pub fn from_alpha(entries: Vec<Scalar>) -> Result<Self> {
        if entries.len() < 4 {
            return malformed(format!("alpha needs at least 4 entries, got {}", entries.len()));
        }
        let m = entries.len() - 3;
        let all_exact = entries.iter().all(Scalar::is_exact);
        if all_exact {
            let s = entries.iter().cloned().fold(Scalar::int(0), |acc, x| acc + x);
            if !s.is_zero() {
                return domain(format!("exponents must sum to zero, sum is {s}"));
            }
        } else {
            let s: C64 = entries.iter().map(Scalar::value).sum();
            if s.norm() > 1e-12 {
                return domain(format!("exponents must sum to zero, |sum| = {:e}", s.norm()));
            }
        }
        Ok(ParameterVector { m, entries })
    }

    /// Convenience constructor from exact integers.
    pub fn integers(alpha: &[i64]) -> Result<Self> {
        Self::from_alpha(alpha.iter().map(|&a| Scalar::int(a)).collect())
    }

    /// Convenience constructor from floats.
    pub fn floats(alpha: &[f64]) -> Result<Self> {
        Self::from_alpha(alpha.iter().map(|&a| Scalar::real(a)).collect())
    }

    pub fn alpha(&self) -> Vec<C64> {
        self.entries.iter().map(Scalar::value).collect()
    }

    pub fn lambdas(&self) -> Vec<C64> {
        self.entries
            .iter()
            .map(|e| match e.as_integer() {
                Some(_) => c(1.0, 0.0),
                None => (TWO_PI_I * e.value()).exp(),
            })
            .collect()
    }

    /// Back to (a, b, c).
    pub fn abc(&self) -> (C64, Vec<C64>, C64) {
        let al = self.alpha();
        let m = self.m;
        let a = al[m + 2];
        let cc = al[m + 1] + al[m + 2];
        let b = (1..=m).map(|i| -al[i]).collect();
        (a, b, cc)
    }

    /// Order of zero of u*phi_0 at site i, for exact integral entries.
    pub fn order(&self, i: usize) -> Option<i64> {
        let k = self.entries[i].as_integer()?;
        Some(if i <= self.m { k } else { k - 1 })
    }

    pub fn classify(&self) -> IndexClassification {
        classify(self)
    }
}

/// Membership of a site in the three index sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SiteClass {
    /// Non-integral exponent.
    Nonintegral,
    /// Integral exponent with u*phi_0 holomorphic at the site (the site lies in D).
    Holomorphic,
    /// Integral exponent with u*phi_0 singular at the site (the site lies in the dual D).
    Polar,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IndexClassification {
    pub m: usize,
    pub nonintegral: Vec<usize>,
    pub holomorphic: Vec<usize>,
    pub polar: Vec<usize>,
    /// Cyclic boundary order (i_0, .., i_{m+2}).
    pub ordered: Vec<usize>,
    /// Whether the cyclic order can be realized with 0 < 1 < infinity on the real line.
    pub realizable: bool,
    pub warnings: Vec<String>,
}

impl IndexClassification {
    pub fn r(&self) -> usize {
        self.holomorphic.len()
    }

    pub fn s(&self) -> usize {
        self.polar.len()
    }

    pub fn fully_integral(&self) -> bool {
        self.nonintegral.is_empty()
    }

    pub fn class_of(&self, i: usize) -> SiteClass {
        if self.holomorphic.contains(&i) {
            SiteClass::Holomorphic
        } else if self.polar.contains(&i) {
            SiteClass::Polar
        } else {
            SiteClass::Nonintegral
        }
    }

    /// Position of site i in `ordered`.
    pub fn pos(&self, i: usize) -> usize {
        self.ordered.iter().position(|&k| k == i).expect("site index in range")
    }

    pub fn n_sites(&self) -> usize {
        self.m + 3
    }
}

fn near_integer(z: C64) -> bool {
    z.im.abs() < 1e-9 && (z.re - z.re.round()).abs() < 1e-9
}

pub fn classify(pv: &ParameterVector) -> IndexClassification {
    let m = pv.m;
    let mut nonintegral = Vec::new();
    let mut holomorphic = Vec::new();
    let mut polar = Vec::new();
    let mut warnings = Vec::new();
    for i in 0..m + 3 {
        match pv.order(i) {
            Some(o) if o >= 0 => holomorphic.push(i),
            Some(_) => polar.push(i),
            None => {
                let v = pv.entries[i].value();
                if near_integer(v) {
                    warnings.push(format!(
                        "alpha_{i} = {v} is within 1e-9 of an integer but inexact; treated as non-integral"
                    ));
                }
                nonintegral.push(i);
            }
        }
    }
    let (ordered, realizable) = boundary_order(m, &nonintegral, &holomorphic, &polar);
    IndexClassification { m, nonintegral, holomorphic, polar, ordered, realizable, warnings }
}

/// 0, 1, infinity must appear in this cyclic order along the boundary of the upper half plane.
fn orientation_ok(m: usize, seq: &[usize]) -> bool {
    let n = seq.len();
    let p_inf = seq.iter().position(|&k| k == m + 2).unwrap();
    let after = |k: usize| (seq.iter().position(|&j| j == k).unwrap() + n - p_inf) % n;
    after(0) < after(m + 1)
}

fn boundary_order(
    m: usize,
    nonintegral: &[usize],
    holomorphic: &[usize],
    polar: &[usize],
) -> (Vec<usize>, bool) {
    let mut seq = Vec::with_capacity(m + 3);
    if let Some((&first, rest)) = nonintegral.split_first() {
        seq.push(first);
        seq.extend_from_slice(holomorphic);
        seq.extend_from_slice(polar);
        seq.extend_from_slice(rest);
    } else {
        let (&last, rest) = polar.split_last().expect("an integral vector has a polar site");
        seq.push(last);
        seq.extend_from_slice(holomorphic);
        seq.extend_from_slice(rest);
    }
    if orientation_ok(m, &seq) {
        return (seq, true);
    }
    // Swapping two of {0, m+1, m+2} within one class reverses their cyclic orientation
    // and keeps the block structure.
    let specials = [0, m + 1, m + 2];
    for class in [holomorphic, polar, nonintegral] {
        let inside: Vec<usize> = specials.iter().copied().filter(|k| class.contains(k)).collect();
        if inside.len() >= 2 {
            let a = seq.iter().position(|&k| k == inside[0]).unwrap();
            let b = seq.iter().position(|&k| k == inside[1]).unwrap();
            seq.swap(a, b);
            debug_assert!(orientation_ok(m, &seq));
            return (seq, true);
        }
    }
    (seq, false)
}

/// Which exponents are exact integers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stratum {
    Generic,
    PartiallyIntegral,
    FullyIntegral,
}

impl Stratum {
    pub const ALL: [Stratum; 3] = [Stratum::Generic, Stratum::PartiallyIntegral, Stratum::FullyIntegral];
}

/// Random parameters in a stratum whose boundary order admits an aligned configuration.
/// Integral entries lie in -2..=2 (the balancing one in -3..=3); float entries stay 0.06 away
/// from the integers.
pub fn sample_parameters<R: Rng>(m: usize, stratum: Stratum, rng: &mut R) -> ParameterVector {
    let n = m + 3;
    let far_from_int = |v: f64| (v - v.round()).abs() > 0.06;
    loop {
        let integral: Vec<bool> = match stratum {
            Stratum::Generic => vec![false; n],
            Stratum::FullyIntegral => vec![true; n],
            Stratum::PartiallyIntegral => (0..n).map(|_| rng.random_bool(0.4)).collect(),
        };
        let n_float = integral.iter().filter(|&&b| !b).count();
        if stratum == Stratum::PartiallyIntegral && (n_float < 2 || n_float == n) {
            continue;
        }
        let last = (0..n).rev().find(|&i| !integral[i]).unwrap_or(n - 1);
        let mut vals = vec![0.0; n];
        let mut sum = 0.0;
        for i in 0..n {
            if i == last {
                continue;
            }
            vals[i] = if integral[i] { rng.random_range(-2..=2) as f64 } else { rng.random_range(-1.4..1.4) };
            sum += vals[i];
        }
        vals[last] = -sum;
        if vals[last].abs() > 3.0 + 1e-12 {
            continue;
        }
        if (0..n).any(|i| !integral[i] && !far_from_int(vals[i])) {
            continue;
        }
        if integral[last] && (vals[last] - vals[last].round()).abs() > 1e-9 {
            continue;
        }
        let entries = (0..n)
            .map(|i| if integral[i] { Scalar::int(vals[i].round() as i64) } else { Scalar::real(vals[i]) })
            .collect();
        let Ok(pv) = ParameterVector::from_alpha(entries) else { continue };
        if pv.classify().realizable {
            return pv;
        }
    }
}

/// x_1..x_m; the sites 0, 1, infinity are implicit.
#[derive(Clone, Debug, PartialEq)]
pub struct PointConfiguration {
    pub m: usize,
    pub x: Vec<C64>,
    pub aligned: bool,
}

impl PointConfiguration {
    pub fn new(x: Vec<C64>) -> Result<Self> {
        let pc = PointConfiguration { m: x.len(), x, aligned: false };
        pc.check_regular()?;
        Ok(pc)
    }

    pub fn real(x: &[f64]) -> Result<Self> {
        Self::new(x.iter().map(|&v| c(v, 0.0)).collect())
    }

    /// The finite sites (0, x_1, .., x_m, 1).
    pub fn finite_sites(&self) -> Vec<C64> {
        let mut s = Vec::with_capacity(self.m + 2);
        s.push(c(0.0, 0.0));
        s.extend_from_slice(&self.x);
        s.push(c(1.0, 0.0));
        s
    }

    /// Rejects coincidences among 0, x_i, 1.
    pub fn check_regular(&self) -> Result<()> {
        let s = self.finite_sites();
        for i in 0..s.len() {
            if !(s[i].re.is_finite() && s[i].im.is_finite()) {
                return domain(format!("site {i} is not finite"));
            }
            for j in 0..i {
                if (s[i] - s[j]).norm() < 1e-14 {
                    return domain(format!("sites {j} and {i} coincide (singular locus)"));
                }
            }
        }
        Ok(())
    }

    pub fn min_gap(&self) -> f64 {
        let s = self.finite_sites();
        let mut g = f64::INFINITY;
        for i in 0..s.len() {
            for j in 0..i {
                g = g.min((s[i] - s[j]).norm());
            }
        }
        g
    }

    /// Checks that the points are real and realize the classification's cyclic order,
    /// and marks the configuration aligned.
    pub fn align_to(mut self, cls: &IndexClassification) -> Result<Self> {
        if self.m != cls.m {
            return malformed(format!("configuration has m={}, parameters have m={}", self.m, cls.m));
        }
        if self.x.iter().any(|z| z.im != 0.0) {
            return domain("aligned configurations must be real");
        }
        let s = self.finite_sites();
        let mut idx: Vec<usize> = (0..self.m + 2).collect();
        idx.sort_by(|&a, &b| s[a].re.partial_cmp(&s[b].re).unwrap());
        let p = cls.pos(self.m + 2);
        let n = self.m + 3;
        let want: Vec<usize> = (1..n).map(|k| cls.ordered[(p + k) % n]).collect();
        if idx != want {
            return domain(format!(
                "points are ordered {idx:?} along the real line but the classification needs {want:?}"
            ));
        }
        self.aligned = true;
        Ok(self)
    }
}

/// Real points realizing the cyclic order, with consecutive gaps `spacing`.
pub fn aligned_configuration(cls: &IndexClassification, spacing: f64) -> Result<PointConfiguration> {
    if !(spacing > 0.0 && spacing.is_finite()) {
        return malformed("spacing must be positive");
    }
    if !cls.realizable {
        return domain(
            "the boundary order puts 0, 1, infinity in the wrong orientation; no aligned configuration exists",
        );
    }
    let m = cls.m;
    let n = m + 3;
    let p = cls.pos(m + 2);
    let line: Vec<usize> = (1..n).map(|k| cls.ordered[(p + k) % n]).collect();
    let j0 = line.iter().position(|&k| k == 0).unwrap();
    let j1 = line.iter().position(|&k| k == m + 1).unwrap();
    if (j1 - j0 - 1) as f64 * spacing >= 1.0 {
        return domain(format!(
            "{} points must fit strictly between 0 and 1 with spacing {spacing}",
            j1 - j0 - 1
        ));
    }
    let mut x = vec![c(0.0, 0.0); m];
    for (k, &site) in line.iter().enumerate() {
        if site == 0 || site == m + 1 {
            continue;
        }
        let v = if k < j0 {
            -((j0 - k) as f64) * spacing
        } else if k < j1 {
            (k - j0) as f64 * spacing
        } else {
            1.0 + (k - j1) as f64 * spacing
        };
        x[site - 1] = c(v, 0.0);
    }
    PointConfiguration::new(x)?.align_to(cls)
}

pub fn default_spacing(m: usize) -> f64 {
    1.0 / (m as f64 + 2.0)
}
