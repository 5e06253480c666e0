//! Nyström matrices of the elastic layer operators on a circle.
//!
//! Densities are interleaved (`2j` = first component at node `j`). Kernels
//! with a logarithmic singularity are split as `L(r) ln r + M(x, y)` and the
//! `L` part is integrated with the Kress product rule; the Cauchy kernel of
//! the static Neumann–Poincaré operator is integrated with the discrete
//! conjugate-function weights.

use std::f64::consts::PI;

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boundary::{BoundaryField, DiskBoundary};
use crate::core_types::ElasticMedium;
use crate::kernels::expansion::{beta, ExpansionCoefficients};
use crate::kernels::green::{
    log_part_b, log_part_dynamic, radial, radial_a, radial_b, radial_dynamic, radial_static, traction, Radial,
};
use crate::linalg::CMatrix;
use crate::{Error, Result};

/// Which operator a matrix discretises.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OperatorKind {
    S,
    Kstar,
    Shat,
    S1,
    S2,
    K1star,
    K2star,
}

/// Expansion operators of the low-frequency series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExpansionKind {
    S1,
    S2,
    K1star,
    K2star,
}

/// Dense `2n x 2n` Nyström matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    pub matrix: CMatrix,
    pub kind: OperatorKind,
    pub k: Complex64,
}

impl DenseOperator {
    pub fn apply(&self, u: &BoundaryField) -> BoundaryField {
        let v = &self.matrix * u.to_vector();
        BoundaryField::from_vector(&v).expect("even length")
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}

/// Kress weights `R(l)` with
/// `int_0^{2pi} ln(4 sin^2((t_i - tau)/2)) f(tau) dtau ~ sum_j R(i - j) f_j`.
pub fn kress_weights(n: usize) -> Vec<f64> {
    let m = n / 2;
    let nf = n as f64;
    (0..n)
        .map(|l| {
            let s: f64 = (1..m)
                .map(|k| (2.0 * PI * (k * l) as f64 / nf).cos() / k as f64)
                .sum();
            let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
            -4.0 * PI / nf * s - 4.0 * PI / (nf * nf) * sign
        })
        .collect()
}

/// Weights `w(l)` with
/// `(1/2pi) p.v. int cot((t_i - tau)/2) f(tau) dtau ~ sum_j w(i - j) f_j`.
pub fn hilbert_weights(n: usize) -> Vec<f64> {
    let m = n / 2;
    let nf = n as f64;
    (0..n)
        .map(|l| 2.0 / nf * (1..m).map(|k| (2.0 * PI * (k * l) as f64 / nf).sin()).sum::<f64>())
        .collect()
}

fn assemble_blocks<F>(n: usize, block: F) -> CMatrix
where
    F: Fn(usize, usize) -> Matrix2<Complex64> + Sync,
{
    let rows: Vec<Vec<Matrix2<Complex64>>> = (0..n)
        .into_par_iter()
        .map(|i| (0..n).map(|j| block(i, j)).collect())
        .collect();
    let mut m = CMatrix::zeros(2 * n, 2 * n);
    for (i, row) in rows.iter().enumerate() {
        for (j, b) in row.iter().enumerate() {
            m.fixed_view_mut::<2, 2>(2 * i, 2 * j).copy_from(b);
        }
    }
    m
}

/// Geometry of one node pair.
struct Pair {
    d: Vector2<f64>,
    r: f64,
    /// `ln(4 sin^2((t_i - t_j)/2))`.
    log4sin2: f64,
    /// `cot((t_i - t_j)/2)`.
    cot: f64,
}

fn pair(b: &DiskBoundary, i: usize, j: usize) -> Pair {
    let d = b.nodes[i] - b.nodes[j];
    let s = b.angles[i] - b.angles[j];
    let h = (0.5 * s).sin();
    Pair {
        d,
        r: d.norm(),
        log4sin2: (4.0 * h * h).ln(),
        cot: (0.5 * s).cos() / h,
    }
}

/// Kress quadrature block for a kernel `L ln r + M`: off the diagonal `full`
/// is the kernel value, on the diagonal it is `lim (K - L ln r)`.
fn kress_block(
    b: &DiskBoundary,
    rw: &[f64],
    i: usize,
    j: usize,
    full: Matrix2<Complex64>,
    log: Matrix2<Complex64>,
    log4sin2: f64,
) -> Matrix2<Complex64> {
    let n = b.n_nodes;
    let rr = b.radius;
    let h = 2.0 * PI / n as f64;
    let l = (i + n - j) % n;
    let smooth = if i == j {
        full + log * Complex64::new(rr.ln(), 0.0)
    } else {
        full - log * Complex64::new(0.5 * log4sin2, 0.0)
    };
    (log * Complex64::new(0.5 * rw[l], 0.0) + smooth * Complex64::new(h, 0.0)) * Complex64::new(rr, 0.0)
}

fn tt(b: &DiskBoundary, i: usize) -> Matrix2<f64> {
    let t = b.tangent(i);
    t * t.transpose()
}

fn c64(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn complexify(m: Matrix2<f64>) -> Matrix2<Complex64> {
    m.map(|v| Complex64::new(v, 0.0))
}

/// Single-layer operator `S^k` (static at `k = 0`).
pub fn assemble_s(b: &DiskBoundary, k: Complex64, medium: &ElasticMedium) -> Result<DenseOperator> {
    let rw = kress_weights(b.n_nodes);
    let t1 = medium.tau1() / (2.0 * PI);
    let t2 = medium.tau2() / (2.0 * PI);
    let dynamic = k.norm() != 0.0;
    let beta_k = if dynamic { beta(k, medium)? } else { Complex64::new(0.0, 0.0) };
    let id = Matrix2::<Complex64>::identity();
    let failure = std::sync::Mutex::new(None);
    let matrix = assemble_blocks(b.n_nodes, |i, j| {
        let p = pair(b, i, j);
        let (full, log) = if i == j {
            let l0 = if dynamic {
                log_part_dynamic(0.0, k, medium).matrix(Vector2::zeros())
            } else {
                Matrix2::zeros()
            };
            (id * beta_k - complexify(tt(b, i) * t2), id * c64(t1) + l0)
        } else {
            let rad = match radial(p.r, k, medium) {
                Ok(v) => v,
                Err(e) => {
                    failure.lock().unwrap().get_or_insert(e);
                    return Matrix2::zeros();
                }
            };
            let l = if dynamic {
                log_part_dynamic(p.r, k, medium).matrix(p.d)
            } else {
                Matrix2::zeros()
            };
            (rad.matrix(p.d), id * c64(t1) + l)
        };
        kress_block(b, &rw, i, j, full, log, p.log4sin2)
    });
    if let Some(e) = failure.into_inner().unwrap() {
        return Err(e);
    }
    Ok(DenseOperator {
        matrix,
        kind: OperatorKind::S,
        k,
    })
}

/// Leading operator `S_D[phi] + beta_k int phi`.
pub fn assemble_s_hat(b: &DiskBoundary, k: Complex64, medium: &ElasticMedium) -> Result<DenseOperator> {
    let bk = beta(k, medium)?;
    let mut op = assemble_s(b, Complex64::new(0.0, 0.0), medium)?;
    let w = b.weight();
    let n = b.n_nodes;
    for i in 0..n {
        for j in 0..n {
            for c in 0..2 {
                op.matrix[(2 * i + c, 2 * j + c)] += bk * w;
            }
        }
    }
    op.kind = OperatorKind::Shat;
    op.k = k;
    Ok(op)
}

/// Static Neumann–Poincaré kernel on the circle split as
/// `smooth(s) + cot(s/2) C`, returning `(smooth at s = 0, C)` for node `i`.
fn static_np_parts(b: &DiskBoundary, i: usize, medium: &ElasticMedium) -> (Matrix2<f64>, Matrix2<f64>) {
    let t1 = medium.tau1() / (2.0 * PI);
    let t2 = medium.tau2() / (2.0 * PI);
    let (lam, mu) = (medium.lambda, medium.mu);
    let p = lam * (t1 - t2) - 2.0 * mu * t2;
    let q = mu * (t1 - t2);
    let nu = b.normals[i];
    let t = b.tangent(i);
    let inv = 0.5 / b.radius;
    let nn = nu * nu.transpose();
    let diag = ((p + q) * nn + q * Matrix2::identity() + 4.0 * mu * t2 * t * t.transpose()) * inv;
    let cpart = (p * nu * t.transpose() + q * t * nu.transpose()) * inv;
    (diag, cpart)
}

/// Neumann–Poincaré operator `K^{k,*}` (static at `k = 0`).
pub fn assemble_kstar(b: &DiskBoundary, k: Complex64, medium: &ElasticMedium) -> Result<DenseOperator> {
    let n = b.n_nodes;
    let rw = kress_weights(n);
    let hw = hilbert_weights(n);
    let h = 2.0 * PI / n as f64;
    let rr = b.radius;
    let dynamic = k.norm() != 0.0;
    let failure = std::sync::Mutex::new(None);
    let matrix = assemble_blocks(n, |i, j| {
        let (diag, cpart) = static_np_parts(b, i, medium);
        let l = (i + n - j) % n;
        let p = pair(b, i, j);
        let nu = b.normals[i];
        let smooth0 = if i == j {
            complexify(diag)
        } else {
            traction(p.d, nu, &radial_static(p.r, medium), medium) - complexify(cpart * p.cot)
        };
        let mut block = smooth0 * Complex64::new(h * rr, 0.0) + complexify(cpart * (2.0 * PI * rr * hw[l]));
        if dynamic && i != j {
            let rad = match radial_dynamic(p.r, k, medium) {
                Ok(v) => v,
                Err(e) => {
                    failure.lock().unwrap().get_or_insert(e);
                    return Matrix2::zeros();
                }
            };
            let delta = rad - radial_static(p.r, medium);
            let full = traction(p.d, nu, &delta, medium);
            let log = traction(p.d, nu, &log_part_dynamic(p.r, k, medium), medium);
            block += kress_block(b, &rw, i, j, full, log, p.log4sin2);
        }
        block
    });
    if let Some(e) = failure.into_inner().unwrap() {
        return Err(e);
    }
    Ok(DenseOperator {
        matrix,
        kind: OperatorKind::Kstar,
        k,
    })
}

/// Operators of the `k^2 ln k` and `k^2` terms of the low-frequency series.
pub fn assemble_expansion_op(b: &DiskBoundary, which: ExpansionKind, medium: &ElasticMedium) -> DenseOperator {
    let n = b.n_nodes;
    let rw = kress_weights(n);
    let w = b.weight();
    let coeffs = ExpansionCoefficients::new(medium);
    let zero = Matrix2::<Complex64>::zeros();
    let matrix = assemble_blocks(n, |i, j| {
        if i == j && which != ExpansionKind::S2 {
            return zero;
        }
        let p = pair(b, i, j);
        let nu = b.normals[i];
        match which {
            ExpansionKind::S1 => radial_a(p.r, medium).matrix(p.d) * Complex64::new(w, 0.0),
            ExpansionKind::K1star => traction(p.d, nu, &radial_a(p.r, medium), medium) * Complex64::new(w, 0.0),
            ExpansionKind::S2 => {
                if i == j {
                    kress_block(b, &rw, i, j, zero, zero, 0.0)
                } else {
                    let full = radial_b(p.r, medium, &coeffs).matrix(p.d);
                    let log = log_part_b(p.r, medium, &coeffs).matrix(p.d);
                    kress_block(b, &rw, i, j, full, log, p.log4sin2)
                }
            }
            ExpansionKind::K2star => {
                let full = traction(p.d, nu, &radial_b(p.r, medium, &coeffs), medium);
                let log = traction(p.d, nu, &log_part_b(p.r, medium, &coeffs), medium);
                kress_block(b, &rw, i, j, full, log, p.log4sin2)
            }
        }
    });
    let kind = match which {
        ExpansionKind::S1 => OperatorKind::S1,
        ExpansionKind::S2 => OperatorKind::S2,
        ExpansionKind::K1star => OperatorKind::K1star,
        ExpansionKind::K2star => OperatorKind::K2star,
    };
    DenseOperator {
        matrix,
        kind,
        k: Complex64::new(0.0, 0.0),
    }
}

/// Side of the boundary on which a field is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Interior,
    Exterior,
}

fn check_target(side: Side, x: Vector2<f64>, b: &DiskBoundary) -> Result<()> {
    let r = x.norm();
    let inside = r < b.radius;
    if inside != (side == Side::Interior) {
        return Err(Error::Domain(format!("point at |x| = {r} is not on the {side:?} side")));
    }
    if (r - b.radius).abs() <= b.spacing() {
        return Err(Error::Accuracy(format!(
            "point at distance {} from the boundary is within one node spacing {}",
            (r - b.radius).abs(),
            b.spacing()
        )));
    }
    Ok(())
}

/// Single-layer potential `int G^k(x - y) phi(y) dsigma(y)` off the boundary.
pub fn eval_field(
    side: Side,
    density: &BoundaryField,
    x: Vector2<f64>,
    k: Complex64,
    b: &DiskBoundary,
    medium: &ElasticMedium,
) -> Result<Vector2<Complex64>> {
    check_target(side, x, b)?;
    let w = Complex64::new(b.weight(), 0.0);
    let mut u = Vector2::zeros();
    for (y, phi) in b.nodes.iter().zip(&density.values) {
        let d = x - y;
        u += radial(d.norm(), k, medium)?.matrix(d) * phi * w;
    }
    Ok(u)
}

/// Conormal derivative (normal `nu`) of the single-layer potential off the
/// boundary.
pub fn eval_traction(
    side: Side,
    density: &BoundaryField,
    x: Vector2<f64>,
    nu: Vector2<f64>,
    k: Complex64,
    b: &DiskBoundary,
    medium: &ElasticMedium,
) -> Result<Vector2<Complex64>> {
    check_target(side, x, b)?;
    let w = Complex64::new(b.weight(), 0.0);
    let mut t = Vector2::zeros();
    for (y, phi) in b.nodes.iter().zip(&density.values) {
        let d = x - y;
        let rad: Radial = radial(d.norm(), k, medium)?;
        t += traction(d, nu, &rad, medium) * phi * w;
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::{basis_f, inner_product, make_disk};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn kress_weights_integrate_log_kernel() {
        // int ln(4 sin^2((t - tau)/2)) cos(m tau) dtau = -2 pi cos(m t)/|m|, and 0 for m = 0
        let n = 32;
        let rw = kress_weights(n);
        for m in 0..n / 2 {
            let i = 3;
            let ti = 2.0 * PI * i as f64 / n as f64;
            let v: f64 = (0..n)
                .map(|j| rw[(i + n - j) % n] * (m as f64 * 2.0 * PI * j as f64 / n as f64).cos())
                .sum();
            let e = if m == 0 { 0.0 } else { -2.0 * PI * (m as f64 * ti).cos() / m as f64 };
            assert!((v - e).abs() < 1e-12, "m = {m}: {v} vs {e}");
        }
    }

    #[test]
    fn hilbert_weights_conjugate_cosines() {
        let n = 32;
        let hw = hilbert_weights(n);
        for m in 1..n / 2 {
            for i in 0..n {
                let ti = 2.0 * PI * i as f64 / n as f64;
                let v: f64 = (0..n)
                    .map(|j| hw[(i + n - j) % n] * (m as f64 * 2.0 * PI * j as f64 / n as f64).cos())
                    .sum();
                assert!((v - (m as f64 * ti).sin()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn static_s_eigenvalues() {
        let m = ElasticMedium::unit();
        for &r in &[0.5, 1.0, 2.0] {
            let b = make_disk(r, 64).unwrap();
            let s = assemble_s(&b, c(0.0), &m).unwrap();
            let f = basis_f(&b);
            let lam12 = m.tau1() * r * r.ln() - m.tau2() * r / 2.0;
            // rotation mode: -(tau1 + tau2) R / 2 = -R / (2 mu)
            let lam3 = -r / (2.0 * m.mu);
            for (i, l) in [(0, lam12), (1, lam12), (2, lam3)] {
                let err = &s.apply(f.get(i)) - &f.get(i).scale(c(l));
                assert!(err.max_norm() < 1e-12, "R = {r}, i = {i}: {}", err.max_norm());
            }
        }
    }

    #[test]
    fn static_np_on_rigid_motions() {
        let m = ElasticMedium::new(1.7, 0.6, 1.0).unwrap();
        let b = make_disk(1.3, 64).unwrap();
        let k = assemble_kstar(&b, c(0.0), &m).unwrap();
        let f = basis_f(&b);
        for i in 0..3 {
            let err = &k.apply(f.get(i)) - &f.get(i).scale(c(0.5));
            assert!(err.max_norm() < 1e-12, "i = {i}: {}", err.max_norm());
        }
    }

    #[test]
    fn s_hat_on_translations() {
        let m = ElasticMedium::unit();
        let b = make_disk(2.0, 64).unwrap();
        let k = Complex64::new(0.01, 0.0);
        let s = assemble_s_hat(&b, k, &m).unwrap();
        let f = basis_f(&b);
        let r = b.radius;
        let lam = m.tau1() * r * r.ln() - m.tau2() * r / 2.0 + (2.0 * PI * r) * beta(k, &m).unwrap();
        let err = &s.apply(&f.f1) - &f.f1.scale(lam);
        assert!(err.max_norm() < 1e-12);
        let f3 = &s.apply(&f.f3) - &f.f3.scale(c(-r / (2.0 * m.mu)));
        assert!(f3.max_norm() < 1e-12);
    }

    #[test]
    fn interior_field_of_translation_is_constant() {
        let m = ElasticMedium::unit();
        let b = make_disk(1.0, 128).unwrap();
        let f = basis_f(&b);
        let u = eval_field(Side::Interior, &f.f1, Vector2::new(0.0, 0.0), c(0.0), &b, &m).unwrap();
        let e = -1.0 / 6.0 / (2.0 * PI).sqrt();
        assert!((u[0] - e).norm() < 1e-12 && u[1].norm() < 1e-14);
        assert!(eval_field(Side::Interior, &f.f1, Vector2::new(0.999, 0.0), c(0.0), &b, &m).is_err());
        assert!(eval_field(Side::Exterior, &f.f1, Vector2::new(0.2, 0.0), c(0.0), &b, &m).is_err());
    }

    #[test]
    fn rotation_eigenvalue_from_interior_field() {
        // plain trapezoid away from the boundary, independent of the
        // singular quadrature
        let m = ElasticMedium::new(1.7, 0.6, 1.0).unwrap();
        let r = 1.3;
        let b = make_disk(r, 2048).unwrap();
        let f = basis_f(&b);
        let x = Vector2::new(0.3, -0.4);
        let u = eval_field(Side::Interior, &f.f3, x, c(0.0), &b, &m).unwrap();
        let c3 = (2.0 * PI * r.powi(3)).sqrt().recip();
        let lam = u[0].re / (c3 * x[1]);
        assert!((lam + r / (2.0 * m.mu)).abs() < 1e-12, "{lam}");
        assert!((u[1].re - lam * (-c3 * x[0])).abs() < 1e-12);
        assert!((lam + m.tau1() * r / 2.0).abs() > 0.1);
    }

    #[test]
    fn static_s_is_symmetric() {
        let m = ElasticMedium::new(2.0, 0.5, 1.0).unwrap();
        let b = make_disk(0.8, 32).unwrap();
        let s = assemble_s(&b, c(0.0), &m).unwrap();
        assert!((&s.matrix - s.matrix.transpose()).norm() < 1e-13 * s.matrix.norm());
        let f = basis_f(&b);
        let lhs = inner_product(&s.apply(&f.f3), &f.f1, &b).unwrap();
        let rhs = inner_product(&f.f3, &s.apply(&f.f1), &b).unwrap();
        assert!((lhs - rhs).norm() < 1e-13);
    }

    #[test]
    fn operator_expansion_remainders() {
        let m = ElasticMedium::new(1.4, 0.8, 1.0).unwrap();
        let b = make_disk(1.1, 64).unwrap();
        let s1 = assemble_expansion_op(&b, ExpansionKind::S1, &m).matrix;
        let s2 = assemble_expansion_op(&b, ExpansionKind::S2, &m).matrix;
        let k1 = assemble_expansion_op(&b, ExpansionKind::K1star, &m).matrix;
        let k2 = assemble_expansion_op(&b, ExpansionKind::K2star, &m).matrix;
        let k0 = assemble_kstar(&b, c(0.0), &m).unwrap().matrix;
        let rem = |kk: f64| {
            let k = c(kk);
            let l = k * k * k.ln();
            let k2c = k * k;
            let rs = assemble_s(&b, k, &m).unwrap().matrix
                - assemble_s_hat(&b, k, &m).unwrap().matrix
                - s1.map(|v| v * l)
                - s2.map(|v| v * k2c);
            let rk = assemble_kstar(&b, k, &m).unwrap().matrix - &k0 - k1.map(|v| v * l) - k2.map(|v| v * k2c);
            (crate::linalg::spectral_norm(&rs), crate::linalg::spectral_norm(&rk))
        };
        let (a1, b1) = rem(1e-1);
        let (a2, b2) = rem(1e-2);
        let bound = 1e-4 * (1e-2f64.ln() / 1e-1f64.ln()).abs() * 10.0;
        println!("S {a1:e} {a2:e} ratio {:e}; K {b1:e} {b2:e} ratio {:e}", a2 / a1, b2 / b1);
        assert!(a2 / a1 < bound && b2 / b1 < bound);
    }

    #[test]
    fn jump_relation_by_extrapolation() {
        let m = ElasticMedium::new(1.4, 0.8, 1.0).unwrap();
        let b = make_disk(1.0, 64).unwrap();
        let fine = make_disk(1.0, 4096).unwrap();
        let phi = BoundaryField::from_fn(64, |j| {
            let t = b.angles[j];
            Vector2::new(c(1.0 + 0.5 * (2.0 * t).cos()), Complex64::new((3.0 * t).sin(), 0.3 * t.cos()))
        });
        let phf = phi.resample(4096);
        for &kk in &[0.0, 0.05] {
            let k = c(kk);
            let kst = assemble_kstar(&b, k, &m).unwrap();
            let kphi = kst.apply(&phi);
            let hs: Vec<f64> = (1..=8).map(|q| 0.01 * q as f64).collect();
            for &i in &[0usize, 7, 20] {
                let x = b.nodes[i];
                let nu = b.normals[i];
                let limit = |side: Side, sign: f64| {
                    let vals: Vec<Vector2<Complex64>> = hs
                        .iter()
                        .map(|h| eval_traction(side, &phf, x + nu * (sign * h), nu, k, &fine, &m).unwrap())
                        .collect();
                    crate::linalg::extrapolate_to_zero(&hs, &vals)
                };
                let ext = limit(Side::Exterior, 1.0);
                let int = limit(Side::Interior, -1.0);
                let e1 = (ext - (kphi.values[i] + phi.values[i] * c(0.5))).norm();
                let e2 = (int - (kphi.values[i] - phi.values[i] * c(0.5))).norm();
                let e3 = (ext - int - phi.values[i]).norm() / phi.values[i].norm();
                println!("k={kk} i={i}: ext {e1:e} int {e2:e} jump {e3:e}");
                assert!(e1 < 1e-6 && e2 < 1e-6 && e3 < 1e-6);
            }
        }
    }
}
