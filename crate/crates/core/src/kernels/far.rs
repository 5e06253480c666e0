//! Far-field kernel of the Kupradze matrix.

use std::f64::consts::PI;

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;

use crate::core_types::ElasticMedium;
use crate::{Error, Result};

/// Longitudinal and transverse parts of the far-field kernel
/// `G^k(x - y) ~ (p e^{i k_p |x|} + s e^{i k_s |x|}) / sqrt|x|` with
/// `x = |x| xhat`, `k = sqrt(rho) omega`.
pub fn far_kernel(
    xhat: Vector2<f64>,
    y: Vector2<f64>,
    omega: Complex64,
    medium: &ElasticMedium,
) -> Result<(Matrix2<Complex64>, Matrix2<Complex64>)> {
    if omega.norm() == 0.0 {
        return Err(Error::Domain("far-field kernel requires omega != 0".into()));
    }
    if (xhat.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::Domain("far-field direction must be a unit vector".into()));
    }
    let p = medium.p_modulus();
    let mu = medium.mu;
    let rq = medium.rho.powf(0.25);
    let root = (omega * PI).sqrt();
    let base = -Complex64::new(1.0, 1.0) / (root * 4.0 * rq);
    let k = omega * medium.rho.sqrt();
    let phase = xhat.dot(&y);
    let ep = (-Complex64::i() * k / p.sqrt() * phase).exp();
    let es = (-Complex64::i() * k / mu.sqrt() * phase).exp();
    let cp = base / p.powf(0.75) * ep;
    let cs = base / mu.powf(0.75) * es;
    let pp = xhat * xhat.transpose();
    let ps = Matrix2::identity() - pp;
    Ok((pp.map(|v| cp * v), ps.map(|v| cs * v)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::green::green_dynamic;

    #[test]
    fn projector_structure() {
        let m = ElasticMedium::new(2.0, 0.8, 1.4).unwrap();
        let xh = Vector2::new(0.6, -0.8);
        let (p, s) = far_kernel(xh, Vector2::new(0.3, 0.2), Complex64::new(0.7, 0.0), &m).unwrap();
        let v = nalgebra::Vector2::new(Complex64::new(1.0, 2.0), Complex64::new(-0.5, 0.3));
        let pv = p * v;
        let sv = s * v;
        assert!((pv[0] * xh[1] - pv[1] * xh[0]).norm() < 1e-15);
        assert!((sv[0] * xh[0] + sv[1] * xh[1]).norm() < 1e-15);
        assert!(far_kernel(xh, Vector2::zeros(), Complex64::new(0.0, 0.0), &m).is_err());
    }

    #[test]
    fn omega_scaling() {
        let m = ElasticMedium::unit();
        let xh = Vector2::new(1.0, 0.0);
        let (p1, _) = far_kernel(xh, Vector2::zeros(), Complex64::new(0.5, 0.0), &m).unwrap();
        let (p2, _) = far_kernel(xh, Vector2::zeros(), Complex64::new(1.0, 0.0), &m).unwrap();
        assert!((p1[(0, 0)].norm() / p2[(0, 0)].norm() - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn matches_kernel_at_large_distance() {
        let m = ElasticMedium::new(1.5, 1.0, 1.2).unwrap();
        let omega = Complex64::new(0.8, 0.0);
        let k = omega * m.rho.sqrt();
        let xh = Vector2::new(0.8, 0.6);
        let y = Vector2::new(0.2, -0.1);
        let (p, s) = far_kernel(xh, y, omega, &m).unwrap();
        let kp = k / m.p_modulus().sqrt();
        let ks = k / m.mu.sqrt();
        let err = |r: f64| {
            let g = green_dynamic(xh * r - y, k, &m).unwrap();
            let a = p * ((Complex64::i() * kp * r).exp() / r.sqrt()) + s * ((Complex64::i() * ks * r).exp() / r.sqrt());
            (g - a).norm() * r.powf(1.5)
        };
        // p and s remainders beat against each other; compare envelopes
        let beat = 2.0 * PI / (ks - kp).re;
        let env = |r0: f64| (0..64).map(|i| err(r0 + beat * i as f64 / 64.0)).fold(0.0, f64::max);
        let (e1, e2) = (env(400.0), env(1600.0));
        assert!(e1 < 2.0 && (e1 / e2 - 1.0).abs() < 0.1, "{e1} {e2}");
    }
}
