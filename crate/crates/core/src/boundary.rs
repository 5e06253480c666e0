//! Disk geometry, trapezoidal quadrature, densities and the rigid-motion basis.

use std::f64::consts::PI;

use nalgebra::{DVector, Vector2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Default number of quadrature nodes.
pub const DEFAULT_NODES: usize = 256;

/// Circle of radius `R` centred at the origin with `n` equispaced nodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiskBoundary {
    pub radius: f64,
    pub n_nodes: usize,
    pub angles: Vec<f64>,
    pub nodes: Vec<Vector2<f64>>,
    pub weights: Vec<f64>,
    pub normals: Vec<Vector2<f64>>,
}

/// Builds the trapezoidal discretisation of `|x| = radius`.
pub fn make_disk(radius: f64, n_nodes: usize) -> Result<DiskBoundary> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::Config(format!("radius must be positive, got {radius}")));
    }
    if n_nodes < 16 || !n_nodes.is_multiple_of(2) {
        return Err(Error::Config(format!("n_nodes must be even and >= 16, got {n_nodes}")));
    }
    let angles: Vec<f64> = (0..n_nodes).map(|j| 2.0 * PI * j as f64 / n_nodes as f64).collect();
    let normals: Vec<Vector2<f64>> = angles.iter().map(|t| Vector2::new(t.cos(), t.sin())).collect();
    let nodes = normals.iter().map(|v| v * radius).collect();
    let weights = vec![2.0 * PI * radius / n_nodes as f64; n_nodes];
    Ok(DiskBoundary {
        radius,
        n_nodes,
        angles,
        nodes,
        weights,
        normals,
    })
}

impl DiskBoundary {
    /// Uniform node weight `2 pi R / n`.
    pub fn weight(&self) -> f64 {
        self.weights[0]
    }

    /// Unit tangent `(-sin t, cos t)` at node `j`.
    pub fn tangent(&self, j: usize) -> Vector2<f64> {
        let v = self.normals[j];
        Vector2::new(-v[1], v[0])
    }

    /// Node spacing along the arc.
    pub fn spacing(&self) -> f64 {
        self.weight()
    }

    /// Same circle scaled by `s`.
    pub fn scaled(&self, s: f64) -> Result<DiskBoundary> {
        make_disk(self.radius * s, self.n_nodes)
    }

    /// Integral of a scalar sampled at the nodes.
    pub fn integrate(&self, f: impl Fn(usize) -> Complex64) -> Complex64 {
        (0..self.n_nodes).map(|j| f(j) * self.weights[j]).sum()
    }
}

/// A complex 2-vector density sampled at the nodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryField {
    pub values: Vec<Vector2<Complex64>>,
}

impl BoundaryField {
    pub fn zeros(n: usize) -> Self {
        Self {
            values: vec![Vector2::zeros(); n],
        }
    }

    pub fn from_fn(n: usize, f: impl Fn(usize) -> Vector2<Complex64>) -> Self {
        Self {
            values: (0..n).map(f).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Interleaved coordinates `(u_0x, u_0y, u_1x, ...)`.
    pub fn to_vector(&self) -> DVector<Complex64> {
        DVector::from_fn(2 * self.len(), |k, _| self.values[k / 2][k % 2])
    }

    pub fn from_vector(v: &DVector<Complex64>) -> Result<Self> {
        if !v.len().is_multiple_of(2) {
            return Err(Error::Domain(format!("vector length {} is odd", v.len())));
        }
        Ok(Self::from_fn(v.len() / 2, |j| Vector2::new(v[2 * j], v[2 * j + 1])))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    /// Largest node-wise Euclidean norm.
    pub fn max_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `int u dsigma` as a 2-vector.
    pub fn integral(&self, boundary: &DiskBoundary) -> Vector2<Complex64> {
        self.values
            .iter()
            .zip(&boundary.weights)
            .map(|(v, w)| v * Complex64::new(*w, 0.0))
            .sum()
    }

    /// Evaluates the trigonometric interpolant at `m` equispaced points.
    pub fn resample(&self, m: usize) -> Self {
        let n = self.len();
        let half = n / 2;
        let coeffs: Vec<(i64, Vector2<Complex64>)> = (0..n)
            .map(|q| {
                let kk = if q <= half { q as i64 } else { q as i64 - n as i64 };
                let mut c = Vector2::zeros();
                for (j, v) in self.values.iter().enumerate() {
                    let ph = -2.0 * PI * (kk * j as i64) as f64 / n as f64;
                    c += v * Complex64::from_polar(1.0, ph);
                }
                // split the Nyquist mode evenly so real data stays real
                let w = if q == half { 0.5 } else { 1.0 };
                (kk, c * Complex64::new(w / n as f64, 0.0))
            })
            .collect();
        let mut all = coeffs.clone();
        all.push((-(half as i64), coeffs[half].1));
        Self::from_fn(m, |i| {
            let t = 2.0 * PI * i as f64 / m as f64;
            all.iter().map(|(kk, c)| c * Complex64::from_polar(1.0, *kk as f64 * t)).sum()
        })
    }
}

impl std::ops::Add for &BoundaryField {
    type Output = BoundaryField;
    fn add(self, o: &BoundaryField) -> BoundaryField {
        BoundaryField {
            values: self.values.iter().zip(&o.values).map(|(a, b)| a + b).collect(),
        }
    }
}

impl std::ops::Sub for &BoundaryField {
    type Output = BoundaryField;
    fn sub(self, o: &BoundaryField) -> BoundaryField {
        BoundaryField {
            values: self.values.iter().zip(&o.values).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Orthonormal translations `f1`, `f2` and rotation `f3` on the circle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RigidMotionBasis {
    pub f1: BoundaryField,
    pub f2: BoundaryField,
    pub f3: BoundaryField,
}

impl RigidMotionBasis {
    pub fn get(&self, i: usize) -> &BoundaryField {
        match i {
            0 => &self.f1,
            1 => &self.f2,
            _ => &self.f3,
        }
    }

    pub fn all(&self) -> [&BoundaryField; 3] {
        [&self.f1, &self.f2, &self.f3]
    }
}

/// `f1 = (2 pi R)^{-1/2} e1`, `f2 = (2 pi R)^{-1/2} e2`,
/// `f3 = (2 pi R^3)^{-1/2} (x2, -x1)`.
pub fn basis_f(boundary: &DiskBoundary) -> RigidMotionBasis {
    let r = boundary.radius;
    let n = boundary.n_nodes;
    let c = Complex64::new((2.0 * PI * r).sqrt().recip(), 0.0);
    let c3 = (2.0 * PI * r * r * r).sqrt().recip();
    let zero = Complex64::new(0.0, 0.0);
    RigidMotionBasis {
        f1: BoundaryField::from_fn(n, |_| Vector2::new(c, zero)),
        f2: BoundaryField::from_fn(n, |_| Vector2::new(zero, c)),
        f3: BoundaryField::from_fn(n, |j| {
            let x = boundary.nodes[j];
            Vector2::new(Complex64::new(c3 * x[1], 0.0), Complex64::new(-c3 * x[0], 0.0))
        }),
    }
}

/// `<u, v> = sum_j w_j u_j . conj(v_j)`.
pub fn inner_product(u: &BoundaryField, v: &BoundaryField, boundary: &DiskBoundary) -> Result<Complex64> {
    if u.len() != boundary.n_nodes || v.len() != boundary.n_nodes {
        return Err(Error::Domain(format!(
            "field lengths {} and {} do not match {} nodes",
            u.len(),
            v.len(),
            boundary.n_nodes
        )));
    }
    Ok(u.values
        .iter()
        .zip(&v.values)
        .zip(&boundary.weights)
        .map(|((a, b), w)| (a[0] * b[0].conj() + a[1] * b[1].conj()) * *w)
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn disk_construction() {
        let d = make_disk(1.0, 64).unwrap();
        assert!((d.weights.iter().sum::<f64>() - 2.0 * PI).abs() < 1e-13);
        for j in 0..64 {
            assert!((d.normals[j] * d.radius - d.nodes[j]).norm() < 1e-15);
        }
        assert!(make_disk(1.0, 15).is_err());
        assert!(make_disk(1.0, 18).is_ok());
        assert!(make_disk(1.0, 33).is_err());
        assert!(make_disk(0.0, 64).is_err());
    }

    #[test]
    fn circle_moments() {
        let d = make_disk(2.0, 64).unwrap();
        let m1 = d.integrate(|j| c(d.nodes[j][0]));
        let m2 = d.integrate(|j| c(d.nodes[j][0].powi(2)));
        assert!(m1.norm() < 1e-14);
        assert!((m2.re - 8.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn trig_exactness() {
        let n = 32;
        let d = make_disk(1.0, n).unwrap();
        for m in 1..n / 2 {
            let v = d.integrate(|j| c((m as f64 * d.angles[j]).cos()));
            assert!(v.norm() < 1e-13, "m = {m}");
        }
    }

    #[test]
    fn basis_orthonormal() {
        for &r in &[0.5, 1.0, 3.0] {
            let d = make_disk(r, 32).unwrap();
            let f = basis_f(&d);
            for i in 0..3 {
                for j in 0..3 {
                    let ip = inner_product(f.get(i), f.get(j), &d).unwrap();
                    let e = if i == j { 1.0 } else { 0.0 };
                    assert!((ip - e).norm() < 1e-13, "<f{i}, f{j}> = {ip}");
                }
            }
            assert!(f.f3.integral(&d).norm() < 1e-14);
            for v in &f.f3.values {
                assert!((v.norm() - (2.0 * PI * r).sqrt().recip()).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn inner_product_rules() {
        let d = make_disk(1.0, 16).unwrap();
        let u = BoundaryField::from_fn(16, |j| Vector2::new(Complex64::new(j as f64, 1.0), c(2.0)));
        let v = BoundaryField::from_fn(16, |j| Vector2::new(c(1.0), Complex64::new(0.0, j as f64)));
        let uu = inner_product(&u, &u, &d).unwrap();
        assert!(uu.re > 0.0 && uu.im.abs() < 1e-14);
        let a = Complex64::new(0.3, -2.0);
        let lhs = inner_product(&u.scale(a), &v, &d).unwrap();
        assert!((lhs - a * inner_product(&u, &v, &d).unwrap()).norm() < 1e-12);
        assert!(inner_product(&u, &BoundaryField::zeros(8), &d).is_err());
    }

    #[test]
    fn resample_reproduces_trig_polynomials() {
        let d = make_disk(1.0, 32).unwrap();
        let f = |t: f64| Vector2::new(c(1.0 + (3.0 * t).cos()), Complex64::new((5.0 * t).sin(), (2.0 * t).cos()));
        let u = BoundaryField::from_fn(32, |j| f(d.angles[j]));
        let v = u.resample(100);
        for i in 0..100 {
            let t = 2.0 * PI * i as f64 / 100.0;
            assert!((v.values[i] - f(t)).norm() < 1e-13);
        }
        let w = BoundaryField::from_vector(&u.to_vector()).unwrap();
        assert_eq!(w, u);
    }
}
