//! The Kupradze matrix in radial form `G(d) = phi1(r) I + psi(r) d d^T`.
//!
//! Every kernel used by the layer operators (dynamic, static, expansion
//! terms and their logarithmic parts) is a [`Radial`] record carrying the two
//! profile functions and their `r`-derivatives. Tractions follow from one
//! closed-form formula in [`traction`].

use std::f64::consts::PI;

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;

use super::bessel::{j_scaled, BesselSet};
use super::expansion::{a_weights, beta, ExpansionCoefficients};
use crate::core_types::ElasticMedium;
use crate::{Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Below this value of `|k| r` the dynamic kernel is evaluated through its
/// low-frequency expansion.
pub const NEAR_STATIC_THRESHOLD: f64 = 1e-6;

/// Radial profiles of an isotropic kernel and their `r`-derivatives.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Radial {
    pub phi1: Complex64,
    pub dphi1: Complex64,
    pub psi: Complex64,
    pub dpsi: Complex64,
}

impl Radial {
    /// Matrix `phi1 I + psi d d^T`.
    pub fn matrix(&self, d: Vector2<f64>) -> Matrix2<Complex64> {
        Matrix2::from_fn(|i, j| {
            let diag = if i == j { self.phi1 } else { Complex64::new(0.0, 0.0) };
            diag + self.psi * (d[i] * d[j])
        })
    }
}

impl std::ops::Sub for Radial {
    type Output = Radial;
    fn sub(self, o: Radial) -> Radial {
        Radial {
            phi1: self.phi1 - o.phi1,
            dphi1: self.dphi1 - o.dphi1,
            psi: self.psi - o.psi,
            dpsi: self.dpsi - o.dpsi,
        }
    }
}

/// Static Kelvin matrix `G^0`.
pub fn radial_static(r: f64, medium: &ElasticMedium) -> Radial {
    let t1 = medium.tau1() / (2.0 * PI);
    let t2 = medium.tau2() / (2.0 * PI);
    Radial {
        phi1: Complex64::new(t1 * r.ln(), 0.0),
        dphi1: Complex64::new(t1 / r, 0.0),
        psi: Complex64::new(-t2 / (r * r), 0.0),
        dpsi: Complex64::new(2.0 * t2 / (r * r * r), 0.0),
    }
}

/// Dynamic Kupradze matrix `G^k` at distance `r > 0`.
pub fn radial_dynamic(r: f64, k: Complex64, medium: &ElasticMedium) -> Result<Radial> {
    if k.norm() == 0.0 {
        return Err(Error::Domain("dynamic kernel requires k != 0".into()));
    }
    if r <= 0.0 {
        return Err(Error::Domain("kernel is singular at r = 0".into()));
    }
    if k.norm() * r < NEAR_STATIC_THRESHOLD {
        return radial_near_static(r, k, medium, &ExpansionCoefficients::new(medium));
    }
    radial_hankel(r, k, medium)
}

fn radial_hankel(r: f64, k: Complex64, medium: &ElasticMedium) -> Result<Radial> {
    let cp2 = 1.0 / medium.p_modulus();
    let cs2 = 1.0 / medium.mu;
    let kp = k * cp2.sqrt();
    let ks = k * cs2.sqrt();
    let bp = BesselSet::eval(kp * r)?;
    let bs = BesselSet::eval(ks * r)?;
    let k2 = k * k;
    let r2 = r * r;
    let dq = bp.zh1_reg - bs.zh1_reg;
    let dw = bp.z2h2_reg - bs.z2h2_reg;
    let zp2 = kp * kp * r2;
    let zs2 = ks * ks * r2;
    let phi1 = -I / (4.0 * medium.mu) * bs.h[0] - I / (k2 * 4.0 * r2) * dq;
    let dphi1 = I * ks / (4.0 * medium.mu) * bs.h[1]
        - I / (k2 * 4.0) * ((kp * kp * bp.h[0] - ks * ks * bs.h[0]) / r - dq * (2.0 / (r2 * r)));
    let psi = I / (k2 * 4.0 * r2 * r2) * dw;
    let dpsi = I / (k2 * 4.0)
        * ((kp * zp2 * bp.h[1] - ks * zs2 * bs.h[1]) / (r2 * r2) - dw * (4.0 / (r2 * r2 * r)));
    Ok(Radial {
        phi1,
        dphi1,
        psi,
        dpsi,
    })
}

/// Truncated expansion `G^0 + beta_k I + k^2 ln k A + k^2 B`.
pub fn radial_near_static(
    r: f64,
    k: Complex64,
    medium: &ElasticMedium,
    coeffs: &ExpansionCoefficients,
) -> Result<Radial> {
    let b = beta(k, medium)?;
    let k2 = k * k;
    let k2l = k2 * k.ln();
    let s = radial_static(r, medium);
    let a = radial_a(r, medium);
    let bb = radial_b(r, medium, coeffs);
    Ok(Radial {
        phi1: s.phi1 + b + k2l * a.phi1 + k2 * bb.phi1,
        dphi1: s.dphi1 + k2l * a.dphi1 + k2 * bb.dphi1,
        psi: s.psi + k2l * a.psi + k2 * bb.psi,
        dpsi: s.dpsi + k2l * a.dpsi + k2 * bb.dpsi,
    })
}

/// Polynomial correction `A`.
pub fn radial_a(r: f64, medium: &ElasticMedium) -> Radial {
    let (a1, a2) = a_weights(medium);
    Radial {
        phi1: Complex64::new(a1 * r * r, 0.0),
        dphi1: Complex64::new(2.0 * a1 * r, 0.0),
        psi: Complex64::new(a2, 0.0),
        dpsi: Complex64::new(0.0, 0.0),
    }
}

/// Correction `B` (requires `r > 0`).
pub fn radial_b(r: f64, medium: &ElasticMedium, coeffs: &ExpansionCoefficients) -> Radial {
    let e = coeffs.b_log_diag(medium);
    let f = coeffs.b_log_outer();
    let lr = r.ln();
    Radial {
        phi1: coeffs.sigma1 * (r * r) + e * r * r * lr,
        dphi1: coeffs.sigma1 * (2.0 * r) + e * (2.0 * r * lr + r),
        psi: coeffs.sigma2 + f * lr,
        dpsi: Complex64::new(f / r, 0.0),
    }
}

/// Coefficient of `ln r` in `B`; entire in `r`.
pub fn log_part_b(r: f64, medium: &ElasticMedium, coeffs: &ExpansionCoefficients) -> Radial {
    let e = coeffs.b_log_diag(medium);
    Radial {
        phi1: Complex64::new(e * r * r, 0.0),
        dphi1: Complex64::new(2.0 * e * r, 0.0),
        psi: Complex64::new(coeffs.b_log_outer(), 0.0),
        dpsi: Complex64::new(0.0, 0.0),
    }
}

/// Coefficient of `ln r` in `G^k - G^0`; entire in `r`, vanishing like `r^2`
/// in the identity part. Valid for `r >= 0`.
pub fn log_part_dynamic(r: f64, k: Complex64, medium: &ElasticMedium) -> Radial {
    let cp2 = 1.0 / medium.p_modulus();
    let cs2 = 1.0 / medium.mu;
    let kp = k * cp2.sqrt();
    let ks = k * cs2.sqrt();
    let zp = kp * r;
    let zs = ks * r;
    let jp = j_scaled(zp);
    let js = j_scaled(zs);
    let (_, tp1) = j_tails(zp);
    let (ts0, ts1) = j_tails(zs);
    let tp = 1.0 / (2.0 * PI);
    let k2 = k * k;
    let ell1 = ts0 * (cs2 * tp) + (tp1 * cp2 - ts1 * cs2) * tp;
    let dell1 = -ks * zs * js[1] * (cs2 * tp) - (kp * zp * jp[2] * cp2 - ks * zs * js[2] * cs2) * tp;
    let ell2 = -k2 * tp * (jp[2] * (cp2 * cp2) - js[2] * (cs2 * cs2));
    let dell2 = k2 * tp * (kp * zp * jp[3] * (cp2 * cp2) - ks * zs * js[3] * (cs2 * cs2));
    Radial {
        phi1: ell1,
        dphi1: dell1,
        psi: ell2,
        dpsi: dell2,
    }
}

/// `(J_0(z) - 1, J_1(z)/z - 1/2)` without cancellation at small `z`.
fn j_tails(z: Complex64) -> (Complex64, Complex64) {
    if z.norm() > 0.5 {
        let j = j_scaled(z);
        return (j[0] - 1.0, j[1] - 0.5);
    }
    let q = -(z * z) * 0.25;
    let mut t0 = q;
    let mut t1 = q * 0.25;
    let mut s0 = Complex64::new(0.0, 0.0);
    let mut s1 = Complex64::new(0.0, 0.0);
    for m in 1..30 {
        s0 += t0;
        s1 += t1;
        let mf = m as f64;
        t0 *= q / ((mf + 1.0) * (mf + 1.0));
        t1 *= q / ((mf + 1.0) * (mf + 2.0));
    }
    (s0, s1)
}

/// Conormal derivative in `x` applied to each column of a radial kernel
/// `G(d)`, `d = x - y`, with unit normal `nu` at `x`:
/// `T_ij = lambda div(G e_j) nu_i + mu ((grad + grad^T) G e_j nu)_i`.
pub fn traction(d: Vector2<f64>, nu: Vector2<f64>, rad: &Radial, medium: &ElasticMedium) -> Matrix2<Complex64> {
    let r = d.norm();
    if r == 0.0 {
        return Matrix2::zeros();
    }
    let lam = medium.lambda;
    let mu = medium.mu;
    let dn = d.dot(&nu);
    let a = rad.dphi1 / r;
    let div = a + rad.dpsi * r + rad.psi * 3.0;
    Matrix2::from_fn(|i, j| {
        let delta = if i == j { 1.0 } else { 0.0 };
        div * (lam * nu[i] * d[j])
            + ((a + rad.psi) * (dn * delta + d[i] * nu[j])
                + rad.dpsi * (2.0 * dn / r * d[i] * d[j])
                + rad.psi * (2.0 * nu[i] * d[j]))
                * mu
    })
}

/// Static kernel `G^0(x)`.
pub fn green_static(x: Vector2<f64>, medium: &ElasticMedium) -> Result<Matrix2<Complex64>> {
    let r = x.norm();
    if r == 0.0 {
        return Err(Error::Domain("static kernel is singular at x = 0".into()));
    }
    Ok(radial_static(r, medium).matrix(x))
}

/// Dynamic kernel `G^k(x)`.
pub fn green_dynamic(x: Vector2<f64>, k: Complex64, medium: &ElasticMedium) -> Result<Matrix2<Complex64>> {
    Ok(radial_dynamic(x.norm(), k, medium)?.matrix(x))
}

/// `G^k(x)` for any `k`, falling back to `G^0` at `k = 0`.
pub fn green(x: Vector2<f64>, k: Complex64, medium: &ElasticMedium) -> Result<Matrix2<Complex64>> {
    if k.norm() == 0.0 {
        green_static(x, medium)
    } else {
        green_dynamic(x, k, medium)
    }
}

/// Radial record of `G^k` for any `k` (static at `k = 0`).
pub fn radial(r: f64, k: Complex64, medium: &ElasticMedium) -> Result<Radial> {
    if k.norm() == 0.0 {
        if r <= 0.0 {
            return Err(Error::Domain("kernel is singular at r = 0".into()));
        }
        Ok(radial_static(r, medium))
    } else {
        radial_dynamic(r, k, medium)
    }
}
