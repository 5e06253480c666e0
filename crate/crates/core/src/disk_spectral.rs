//! Closed-form quantities of the disk: single-layer eigenvalues, the Case
//! dichotomy, the matrices `Q` and `P`, and the kernel-basis coefficients.
//!
//! Where the reference closed forms disagree with the discretised operators the
//! default functions return the operator-consistent value and a `published`
//! variant keeps the reference one.

use std::f64::consts::PI;

use nalgebra::Matrix3;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::boundary::{basis_f, inner_product, DiskBoundary};
use crate::core_types::{ContrastParams, ElasticMedium};
use crate::layer_ops::{assemble_expansion_op, ExpansionKind};
use crate::kernels::expansion::{beta, ExpansionCoefficients};
use crate::{Error, Result};

/// `tau1 R ln R - tau2 R / 2`, the translation eigenvalue of `S_D`.
pub fn translation_eigenvalue(radius: f64, medium: &ElasticMedium) -> f64 {
    medium.tau1() * radius * radius.ln() - medium.tau2() * radius / 2.0
}

/// Eigenvalue of the static single layer on `f^(i)`, `i` in `1..=3`.
/// The rotation mode gives `-(tau1 + tau2) R / 2 = -R / (2 mu)`.
pub fn stilde_eigenvalue(i: usize, radius: f64, medium: &ElasticMedium) -> Result<f64> {
    match i {
        1 | 2 => Ok(translation_eigenvalue(radius, medium)),
        3 => Ok(-radius / (2.0 * medium.mu)),
        _ => Err(Error::Domain(format!("mode index {i} outside 1..=3"))),
    }
}

/// Reference eigenvalues; the rotation mode reads `-tau1 R / 2`.
pub fn stilde_eigenvalue_published(i: usize, radius: f64, medium: &ElasticMedium) -> Result<f64> {
    match i {
        1 | 2 => Ok(translation_eigenvalue(radius, medium)),
        3 => Ok(-medium.tau1() * radius / 2.0),
        _ => Err(Error::Domain(format!("mode index {i} outside 1..=3"))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Case {
    Case1,
    Case2,
}

/// Case tag together with the translation eigenvalue it was decided on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CaseTag {
    pub tag: Case,
    pub margin: f64,
}

/// Default classification band `1e-12 max(1, tau1 R |ln R|)`.
pub fn default_case_tolerance(radius: f64, medium: &ElasticMedium) -> f64 {
    1e-12 * (medium.tau1() * radius * radius.ln().abs()).max(1.0)
}

/// Case 1 iff the translation eigenvalue vanishes within `tol`.
pub fn classify_case(radius: f64, medium: &ElasticMedium, tol: Option<f64>) -> CaseTag {
    let margin = translation_eigenvalue(radius, medium);
    let tol = tol.unwrap_or_else(|| default_case_tolerance(radius, medium));
    CaseTag {
        tag: if margin.abs() <= tol { Case::Case1 } else { Case::Case2 },
        margin,
    }
}

/// Radius at which the static single layer loses its translations.
pub fn case1_radius(medium: &ElasticMedium) -> f64 {
    (medium.tau2() / (2.0 * medium.tau1())).exp()
}

/// Diagonal matrices `Q_ij = <K1* f_j, f_i>` and `P_ij = <K2* f_j, f_i>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QPMatrices {
    pub q: Matrix3<f64>,
    pub p: Matrix3<Complex64>,
}

impl QPMatrices {
    pub fn q_ii(&self, i: usize) -> f64 {
        self.q[(i - 1, i - 1)]
    }

    pub fn p_ii(&self, i: usize) -> Complex64 {
        self.p[(i - 1, i - 1)]
    }
}

/// `-R^2 (lambda^2 + 6 mu^2 + 5 lambda mu) / (4 mu (lambda + 2 mu)^2)`.
pub fn q11(radius: f64, medium: &ElasticMedium) -> f64 {
    let (l, m) = (medium.lambda, medium.mu);
    let p = medium.p_modulus();
    -radius * radius * (l * l + 6.0 * m * m + 5.0 * l * m) / (4.0 * m * p * p)
}

/// Translation entry of `P` with the given expansion constants.
pub fn p11(radius: f64, medium: &ElasticMedium, c: &ExpansionCoefficients) -> Complex64 {
    let (l, m) = (medium.lambda, medium.mu);
    let r2 = radius * radius;
    let tt = c.tau1 * c.tau2;
    let lr = radius.ln() + 1.0;
    let a = c.sigma1 * 2.0 + c.sigma2 * 3.0 + ((8.0 * tt - 2.0 / (m * m)) * lr - tt) / (8.0 * PI);
    let b = c.sigma1 * 4.0 + c.sigma2 * 2.0 + (tt / PI - 1.0 / (2.0 * PI * m * m)) * lr;
    a * ((l + m) * PI * r2) + b * (m * PI * r2)
}

/// Operator-consistent `Q` and `P`. The rotation entries are `Q_33 = 0` and
/// `P_33 = R^2 / (8 mu)`.
pub fn matrices_qp(radius: f64, medium: &ElasticMedium) -> QPMatrices {
    let c = ExpansionCoefficients::new(medium);
    let q1 = q11(radius, medium);
    let p1 = p11(radius, medium, &c);
    let p3 = Complex64::new(radius * radius / (8.0 * medium.mu), 0.0);
    QPMatrices {
        q: Matrix3::from_diagonal(&nalgebra::Vector3::new(q1, q1, 0.0)),
        p: Matrix3::from_diagonal(&nalgebra::Vector3::new(p1, p1, p3)),
    }
}

/// Reference `Q` and `P`, evaluated with the given constants.
pub fn matrices_qp_published(radius: f64, medium: &ElasticMedium, c: &ExpansionCoefficients) -> QPMatrices {
    let (l, m) = (medium.lambda, medium.mu);
    let p = medium.p_modulus();
    let r2 = radius * radius;
    let q1 = q11(radius, medium);
    let q3 = r2 * (2.0 * l * l + 7.0 * m * m + 7.0 * l * m) / (4.0 * m * p * p);
    let p1 = p11(radius, medium, c);
    let tt = c.tau1 * c.tau2;
    let lr = radius.ln();
    let a = c.sigma1 * 2.0 + c.sigma2 * 3.0 + tt * (4.0 * lr + 1.0) / (4.0 * PI) - (2.0 * lr + 1.0) / (8.0 * PI * m * m);
    let b = c.sigma1 * -4.0 + c.sigma2 * 2.0 + tt / (2.0 * PI) * (1.0 - lr) + (lr + 1.0) / (4.0 * PI * m * m);
    let p3 = a * ((l + m) * PI * r2) + b * (m * PI * r2);
    QPMatrices {
        q: Matrix3::from_diagonal(&nalgebra::Vector3::new(q1, q1, q3)),
        p: Matrix3::from_diagonal(&nalgebra::Vector3::new(p1, p1, p3)),
    }
}

/// `Q` and `P` by Nyström quadrature of `<K1* f_j, f_i>` and `<K2* f_j, f_i>`.
pub fn quadrature_qp(boundary: &DiskBoundary, medium: &ElasticMedium) -> (Matrix3<Complex64>, Matrix3<Complex64>) {
    let f = basis_f(boundary);
    let k1 = assemble_expansion_op(boundary, ExpansionKind::K1star, medium);
    let k2 = assemble_expansion_op(boundary, ExpansionKind::K2star, medium);
    let mut q = Matrix3::zeros();
    let mut p = Matrix3::zeros();
    for i in 0..3 {
        for j in 0..3 {
            q[(i, j)] = inner_product(&k1.apply(f.get(j)), f.get(i), boundary).expect("same boundary");
            p[(i, j)] = inner_product(&k2.apply(f.get(j)), f.get(i), boundary).expect("same boundary");
        }
    }
    (q, p)
}

/// Coefficients of the kernel basis of `A_0` and of the inverse of the
/// augmented operator on `(sqrt(2 pi R) f^(i), 0)`, `i = 1, 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelBasisCoeffs {
    pub a: [Complex64; 3],
    pub b: [f64; 3],
    pub eta: Complex64,
    pub eta_tilde: Complex64,
}

fn wavenumbers(omega: Complex64, medium: &ElasticMedium, contrast: &ContrastParams) -> Result<(Complex64, Complex64)> {
    if omega.norm() == 0.0 {
        return Err(Error::Domain("omega must be nonzero".into()));
    }
    let k = omega * medium.rho.sqrt();
    Ok((beta(k * contrast.tau, medium)?, beta(k, medium)?))
}

fn normalisers(a: Complex64) -> [f64; 3] {
    let b1 = (1.0 + a.norm_sqr()).sqrt().recip();
    [b1, b1, 0.5f64.sqrt()]
}

/// Operator-consistent coefficients. Acting with `beta_k int` on `f^(i)`
/// yields `2 pi R beta_k f^(i)`, and the orthogonality row of the augmented
/// operator pairs `eta_tilde` with `conj(a_1)`.
pub fn kernel_coeffs(
    omega: Complex64,
    radius: f64,
    medium: &ElasticMedium,
    contrast: &ContrastParams,
    case: &CaseTag,
) -> Result<KernelBasisCoeffs> {
    let (bi, be) = wavenumbers(omega, medium, contrast)?;
    let m = match case.tag {
        Case::Case1 => 0.0,
        Case::Case2 => case.margin,
    };
    let l = 2.0 * PI * radius;
    let den_a = be * l + m;
    if den_a.norm() == 0.0 {
        return Err(Error::Singular("exterior translation eigenvalue of S-hat vanishes".into()));
    }
    let a1 = (bi * l + m) / den_a;
    let ac = a1.conj();
    let den = (ac + 1.0) * m + (ac * bi + be) * l;
    if den.norm() == 0.0 {
        return Err(Error::Singular("augmented operator is singular on the translations".into()));
    }
    let eta_tilde = -Complex64::new(l.sqrt(), 0.0) / den;
    let eta = -ac * eta_tilde;
    let one = Complex64::new(1.0, 0.0);
    Ok(KernelBasisCoeffs {
        a: [a1, a1, one],
        b: normalisers(a1),
        eta,
        eta_tilde,
    })
}

/// Reference coefficients (`sqrt(2 pi R)` weights, no conjugate).
pub fn kernel_coeffs_published(
    omega: Complex64,
    radius: f64,
    medium: &ElasticMedium,
    contrast: &ContrastParams,
    case: &CaseTag,
) -> Result<KernelBasisCoeffs> {
    let (bi, be) = wavenumbers(omega, medium, contrast)?;
    let one = Complex64::new(1.0, 0.0);
    let sq = (2.0 * PI * radius).sqrt();
    let (a1, eta, eta_tilde) = match case.tag {
        Case::Case1 => {
            if be.norm() == 0.0 {
                return Err(Error::Singular("beta of the exterior wavenumber vanishes".into()));
            }
            let d = bi * bi + be * be;
            (bi / be, bi / d, -be / d)
        }
        Case::Case2 => {
            let m = case.margin;
            let den_a = be * sq + m;
            if den_a.norm() == 0.0 {
                return Err(Error::Singular("Case 2 denominator vanishes".into()));
            }
            let a1 = (bi * sq + m) / den_a;
            let d = (a1 + 1.0) * m + (bi * a1 + be) * sq;
            (a1, a1 * sq / d, -Complex64::new(sq, 0.0) / d)
        }
    };
    Ok(KernelBasisCoeffs {
        a: [a1, a1, one],
        b: normalisers(a1),
        eta,
        eta_tilde,
    })
}
