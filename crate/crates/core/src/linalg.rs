//! Dense complex linear algebra helpers over nalgebra.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Solves `A x = b` by partial-pivot LU.
pub fn solve(a: &CMatrix, b: &CVector) -> Result<CVector> {
    if a.nrows() != a.ncols() || a.nrows() != b.len() {
        return Err(Error::Linalg(format!(
            "shape mismatch: {}x{} against {}",
            a.nrows(),
            a.ncols(),
            b.len()
        )));
    }
    a.clone()
        .lu()
        .solve(b)
        .ok_or_else(|| Error::Singular("LU factorisation hit a zero pivot".into()))
}

/// Solves `A X = B` for several right-hand sides.
pub fn solve_many(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    if a.nrows() != a.ncols() || a.nrows() != b.nrows() {
        return Err(Error::Linalg("shape mismatch".into()));
    }
    a.clone()
        .lu()
        .solve(b)
        .ok_or_else(|| Error::Singular("LU factorisation hit a zero pivot".into()))
}

/// Singular values in decreasing order.
pub fn singular_values(a: &CMatrix) -> Vec<f64> {
    let mut s: Vec<f64> = a.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

/// Spectral norm.
pub fn spectral_norm(a: &CMatrix) -> f64 {
    singular_values(a).first().copied().unwrap_or(0.0)
}

/// 2-norm condition number.
pub fn condition_number(a: &CMatrix) -> f64 {
    let s = singular_values(a);
    match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
        _ => f64::INFINITY,
    }
}

/// The `m` smallest singular values (ascending) with the matching right and
/// left singular vectors as matrix columns.
pub fn smallest_singular(a: &CMatrix, m: usize) -> (Vec<f64>, CMatrix, CMatrix) {
    let svd = a.clone().svd(true, true);
    let u = svd.u.expect("requested U");
    let vt = svd.v_t.expect("requested V^H");
    let mut idx: Vec<usize> = (0..svd.singular_values.len()).collect();
    idx.sort_by(|&i, &j| svd.singular_values[i].total_cmp(&svd.singular_values[j]));
    let idx = &idx[..m.min(idx.len())];
    let vals = idx.iter().map(|&i| svd.singular_values[i]).collect();
    let right = CMatrix::from_fn(a.ncols(), idx.len(), |r, c| vt[(idx[c], r)].conj());
    let left = CMatrix::from_fn(a.nrows(), idx.len(), |r, c| u[(r, idx[c])]);
    (vals, right, left)
}

/// Orthonormal basis of the column span (thin QR).
pub fn orthonormalize(a: &CMatrix) -> CMatrix {
    a.clone().qr().q()
}

/// Sine of the largest principal angle between two column spans of equal
/// dimension.
pub fn subspace_angle(a: &CMatrix, b: &CMatrix) -> f64 {
    let qa = orthonormalize(a);
    let qb = orthonormalize(b);
    let proj = &qb * (qb.adjoint() * &qa);
    let resid = &qa - proj;
    spectral_norm(&resid).min(1.0)
}

/// Polynomial (Neville) extrapolation of samples `v(h_i)` to `h = 0`.
pub fn extrapolate_to_zero<const D: usize>(
    h: &[f64],
    v: &[nalgebra::SVector<Complex64, D>],
) -> nalgebra::SVector<Complex64, D> {
    let mut p: Vec<nalgebra::SVector<Complex64, D>> = v.to_vec();
    let n = h.len();
    for m in 1..n {
        for i in 0..n - m {
            let (a, b) = (h[i], h[i + m]);
            p[i] = (p[i + 1] * Complex64::new(a, 0.0) - p[i] * Complex64::new(b, 0.0)) / Complex64::new(a - b, 0.0);
        }
    }
    p[0]
}
