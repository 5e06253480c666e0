//! Low-frequency expansion constants and the correction matrices `A`, `B`.
//!
//! `G^k(x) = G^0(x) + beta_k I + k^2 ln k A(x) + k^2 B(x) + O(k^4 ln k)`.

use std::f64::consts::PI;

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::core_types::ElasticMedium;
use crate::{Error, Result, EULER_GAMMA};

/// Constants of the small-`k` expansion of the Kupradze matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpansionCoefficients {
    pub tau1: f64,
    pub tau2: f64,
    pub rho1: Complex64,
    pub rho2: Complex64,
    pub sigma1: Complex64,
    pub sigma2: Complex64,
    pub euler_gamma: f64,
}

impl ExpansionCoefficients {
    /// Coefficients consistent with the Hankel series of `-(i/4) H_0^(1)`:
    /// `-(i/4) H_0(z) = ln z / 2pi + c0 + (rho1 - ln z / 8pi) z^2
    ///  + (rho2 + ln z / 128pi) z^4 + ...`.
    pub fn new(medium: &ElasticMedium) -> Self {
        let g = EULER_GAMMA;
        let l2 = 2f64.ln();
        let rho1 = Complex64::new(-(g - l2 - 1.0) / (8.0 * PI), 1.0 / 16.0);
        let rho2 = Complex64::new((g - l2 - 1.5) / (128.0 * PI), -1.0 / 256.0);
        Self::assemble(medium, rho1, rho2, 3.0 / (64.0 * PI))
    }

    /// Reference coefficients. Both `rho` constants carry the opposite
    /// overall sign and the `ln mu` weight inside `sigma1` is `-5/(256 pi)`;
    /// kept for comparison only.
    pub fn published(medium: &ElasticMedium) -> Self {
        let g = EULER_GAMMA;
        let l2 = 2f64.ln();
        let rho1 = Complex64::new(g - l2 - 1.0, -PI / 2.0) / (8.0 * PI);
        let rho2 = -Complex64::new(g - l2 - 1.5, -PI / 2.0) / (128.0 * PI);
        Self::assemble(medium, rho1, rho2, -5.0 / (256.0 * PI))
    }

    fn assemble(medium: &ElasticMedium, rho1: Complex64, rho2: Complex64, lnmu_weight: f64) -> Self {
        let mu = medium.mu;
        let p = medium.p_modulus();
        let tau1 = medium.tau1();
        let tau2 = medium.tau2();
        let c128 = 1.0 / (128.0 * PI);
        let sigma1 = (rho1 + lnmu_weight * mu.ln() + rho2 * 4.0 + c128) / (mu * mu)
            - (rho2 * 4.0 + c128 - p.ln() / (64.0 * PI)) / (p * p);
        let sigma2 = (rho2 - mu.ln() / (256.0 * PI)) * (8.0 / (mu * mu))
            - (rho2 - p.ln() / (256.0 * PI)) * (8.0 / (p * p))
            + 3.0 * tau1 * tau2 / (16.0 * PI);
        Self {
            tau1,
            tau2,
            rho1,
            rho2,
            sigma1,
            sigma2,
            euler_gamma: EULER_GAMMA,
        }
    }

    /// Coefficient of `|x|^2 ln|x|` in the diagonal of `B`.
    pub fn b_log_diag(&self, medium: &ElasticMedium) -> f64 {
        (self.tau1 * self.tau2 - 1.0 / (medium.mu * medium.mu)) / (8.0 * PI)
    }

    /// Coefficient of `x_i x_j ln|x|` in `B`.
    pub fn b_log_outer(&self) -> f64 {
        self.tau1 * self.tau2 / (4.0 * PI)
    }
}

/// `beta_k` of the expansion; principal logarithm.
pub fn beta(k: Complex64, medium: &ElasticMedium) -> Result<Complex64> {
    if k.norm() == 0.0 {
        return Err(Error::Domain("beta_k requires k != 0".into()));
    }
    let tau1 = medium.tau1();
    let tau2 = medium.tau2();
    let p = medium.p_modulus();
    let mu = medium.mu;
    let c = Complex64::new(2.0 * EULER_GAMMA - 4f64.ln(), -PI) * (tau1 / (4.0 * PI)) + tau2 / (4.0 * PI);
    Ok(c + (k / p.sqrt()).ln() / (4.0 * PI * p) + (k / mu.sqrt()).ln() / (4.0 * PI * mu))
}

/// Radial weights `(a1, a2)` with `A(x) = a1 |x|^2 I + a2 x x^T`.
pub fn a_weights(medium: &ElasticMedium) -> (f64, f64) {
    let mu2 = medium.mu * medium.mu;
    let p2 = medium.p_modulus() * medium.p_modulus();
    (
        -3.0 / (32.0 * PI * mu2) - 1.0 / (32.0 * PI * p2),
        -1.0 / (16.0 * PI * p2) + 1.0 / (16.0 * PI * mu2),
    )
}

/// The polynomial correction matrix `A(x)`.
pub fn eval_a(x: Vector2<f64>, medium: &ElasticMedium) -> Matrix2<Complex64> {
    let (a1, a2) = a_weights(medium);
    let r2 = x.norm_squared();
    Matrix2::from_fn(|i, j| {
        let d = if i == j { a1 * r2 } else { 0.0 };
        Complex64::new(d + a2 * x[i] * x[j], 0.0)
    })
}

/// The correction matrix `B(x)` for `x != 0`.
pub fn eval_b(x: Vector2<f64>, medium: &ElasticMedium, coeffs: &ExpansionCoefficients) -> Result<Matrix2<Complex64>> {
    let r2 = x.norm_squared();
    if r2 == 0.0 {
        return Err(Error::Domain("B(x) contains ln|x| and is singular at x = 0".into()));
    }
    let lr = 0.5 * r2.ln();
    let e = coeffs.b_log_diag(medium);
    let f = coeffs.b_log_outer();
    Ok(Matrix2::from_fn(|i, j| {
        let diag = if i == j {
            coeffs.sigma1 * r2 + e * r2 * lr
        } else {
            Complex64::new(0.0, 0.0)
        };
        diag + (coeffs.sigma2 + f * lr) * (x[i] * x[j])
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tau_relations() {
        let m = ElasticMedium::unit();
        let c = ExpansionCoefficients::new(&m);
        assert!((c.tau1 - 2.0 / 3.0).abs() < 1e-15);
        assert!((c.tau2 - 1.0 / 3.0).abs() < 1e-15);
        assert!(c.tau1 > c.tau2 && c.tau2 > 0.0);
    }

    #[test]
    fn published_constants_flip_the_rho_signs() {
        let m = ElasticMedium::new(2.5, 0.7, 1.0).unwrap();
        let a = ExpansionCoefficients::new(&m);
        let b = ExpansionCoefficients::published(&m);
        assert!((a.rho1 + b.rho1).norm() < 1e-16);
        assert!((a.rho2 + b.rho2).norm() < 1e-16);
        assert!((b.rho1.im + 1.0 / 16.0).abs() < 1e-16);
    }

    #[test]
    fn beta_examples() {
        let m = ElasticMedium::unit();
        let b = beta(Complex64::new(0.1, 0.0), &m).unwrap();
        assert!((b - Complex64::new(-0.244660, -1.0 / 6.0)).norm() < 5e-6, "{b}");
        for &k in &[1e-4, 0.3, 7.0] {
            let b = beta(Complex64::new(k, 0.0), &m).unwrap();
            assert!((b.im + m.tau1() / 4.0).abs() < 1e-15);
        }
        let b1 = beta(Complex64::new(0.02, 0.0), &m).unwrap();
        let b2 = beta(Complex64::new(0.5, 0.0), &m).unwrap();
        let expect = (0.5f64 / 0.02).ln() * (1.0 / 3.0 + 1.0) / (4.0 * PI);
        assert!((b2 - b1 - expect).norm() < 1e-14);
        assert!(beta(Complex64::new(0.0, 0.0), &m).is_err());
    }

    #[test]
    fn a_example_and_zero() {
        let m = ElasticMedium::unit();
        let a = eval_a(Vector2::new(1.0, 0.0), &m);
        assert!((a[(0, 0)].re + 1.0 / (24.0 * PI)).abs() < 1e-15);
        assert!(eval_a(Vector2::zeros(), &m).iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn b_has_no_log_on_unit_circle() {
        let m = ElasticMedium::new(3.0, 0.5, 2.0).unwrap();
        let c = ExpansionCoefficients::new(&m);
        let x = Vector2::new(0.6, 0.8);
        let b = eval_b(x, &m, &c).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let mut e = c.sigma2 * (x[i] * x[j]);
                if i == j {
                    e += c.sigma1;
                }
                assert!((b[(i, j)] - e).norm() < 1e-15);
            }
        }
        assert!(eval_b(Vector2::zeros(), &m, &c).is_err());
    }
}
