//! Small dense complex matrix helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub const I: C64 = C64::new(0.0, 1.0);
pub const TWO_PI_I: C64 = C64::new(0.0, 2.0 * std::f64::consts::PI);

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn inverse(a: &CMat) -> Result<CMat> {
    a.clone()
        .try_inverse()
        .ok_or_else(|| Error::Numerical("singular matrix".into()))
}

/// Max-abs entry norm.
pub fn max_abs(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Induced infinity norm (max row sum).
pub fn norm_inf(a: &CMat) -> f64 {
    (0..a.nrows())
        .map(|i| (0..a.ncols()).map(|j| a[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Numerical rank from singular values, relative threshold `rtol`.
pub fn rank(a: &CMat, rtol: f64) -> usize {
    let sv = a.clone().svd(false, false).singular_values;
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rtol * smax).count()
}

/// 2-norm condition number.
pub fn condition(a: &CMat) -> f64 {
    let sv = a.clone().svd(false, false).singular_values;
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    let smin = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    smax / smin
}

/// Orthonormal basis (as columns) of the column span of `a`.
pub fn column_space(a: &CMat, rtol: f64) -> CMat {
    let n = a.nrows();
    if a.ncols() == 0 {
        return CMat::zeros(n, 0);
    }
    let svd = a.clone().svd(true, false);
    let u = svd.u.expect("left singular vectors");
    let sv = &svd.singular_values;
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    let keep: Vec<usize> = (0..sv.len()).filter(|&k| smax > 0.0 && sv[k] > rtol * smax).collect();
    let mut q = CMat::zeros(n, keep.len());
    for (c, &k) in keep.iter().enumerate() {
        q.set_column(c, &u.column(k));
    }
    q
}

/// Distance of the columns of `v` from the span of the orthonormal columns of `q`,
/// relative to the size of each column.
pub fn span_residual(q: &CMat, v: &CMat) -> f64 {
    let mut worst: f64 = 0.0;
    for j in 0..v.ncols() {
        let col = v.column(j).into_owned();
        let scale = col.norm().max(1.0);
        let proj = if q.ncols() == 0 {
            CVec::zeros(col.len())
        } else {
            q * (q.adjoint() * &col)
        };
        worst = worst.max((col - proj).norm() / scale);
    }
    worst
}

/// Coefficients of the characteristic polynomial det(zE - A), highest degree first,
/// by the Faddeev-LeVerrier recursion.
pub fn char_poly(a: &CMat) -> Vec<C64> {
    let n = a.nrows();
    let mut coeffs = vec![C64::new(1.0, 0.0)];
    let mut m = CMat::zeros(n, n);
    let id = identity(n);
    for k in 1..=n {
        m = a * &m + id.clone() * coeffs[k - 1];
        let am = a * &m;
        let tr: C64 = (0..n).map(|i| am[(i, i)]).sum();
        coeffs.push(-tr / k as f64);
    }
    coeffs
}

pub fn row(v: &[C64]) -> CMat {
    CMat::from_row_slice(1, v.len(), v)
}

pub fn col(v: &[C64]) -> CMat {
    CMat::from_column_slice(v.len(), 1, v)
}

pub fn to_rows(a: &CMat) -> Vec<Vec<C64>> {
    (0..a.nrows())
        .map(|i| (0..a.ncols()).map(|j| a[(i, j)]).collect())
        .collect()
}

pub fn from_rows(rows: &[Vec<C64>]) -> CMat {
    let n = rows.len();
    let m = rows.first().map_or(0, |r| r.len());
    CMat::from_fn(n, m, |i, j| rows[i][j])
}
