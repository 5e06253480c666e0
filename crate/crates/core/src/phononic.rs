//! Quasi-periodic static Green's function on the unit square lattice, the
//! matrix `Q^alpha` of a scaled disk and the bandgap edge.
//!
//! The lattice sum is split by Ewald's method. With `xi_q = alpha + 2 pi q`,
//! `G^alpha = -[L I / mu + (1/(lambda + 2 mu) - 1/mu) T]` where
//! `L = sum_q e^{i xi.x} / |xi|^2` and `T = sum_q xi xi^T e^{i xi.x} / |xi|^4`.
//! Each sum is a Gaussian-damped reciprocal part plus a spatial part built
//! from the exponential integral.

use std::f64::consts::PI;

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boundary::DiskBoundary;
use crate::core_types::{ContrastParams, ElasticMedium};
use crate::disk_spectral::translation_eigenvalue;
use crate::kernels::expansion::beta;
use crate::layer_ops::{assemble_s, assemble_s_hat, DenseOperator, OperatorKind};
use crate::linalg::{solve_many, spectral_norm, CMatrix};
use crate::{Error, Result, EULER_GAMMA};

/// Default exclusion radius around the origin of the Brillouin zone.
pub const DEFAULT_ALPHA_FLOOR: f64 = 0.3;
/// Default shell count of both Ewald sums.
pub const DEFAULT_TRUNCATION: usize = 4;
/// Tail tolerance of the Ewald sums.
pub const TAIL_TOLERANCE: f64 = 1e-10;
/// Largest admissible scale of the disk inside the unit cell.
pub const MAX_SCALE: f64 = 0.4;

fn c64(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Quasi-momentum, cell scale and Ewald shell count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeParams {
    pub alpha: Vector2<f64>,
    pub scale: f64,
    pub truncation: usize,
    pub alpha_floor: f64,
}

impl LatticeParams {
    pub fn new(alpha: Vector2<f64>, scale: f64) -> Result<Self> {
        let p = Self {
            alpha,
            scale,
            truncation: DEFAULT_TRUNCATION,
            alpha_floor: DEFAULT_ALPHA_FLOOR,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        check_alpha(self.alpha, self.alpha_floor)?;
        if !(self.scale > 0.0 && self.scale < 1.0) {
            return Err(Error::Config(format!("scale must lie in (0, 1), got {}", self.scale)));
        }
        Ok(())
    }
}

fn check_alpha(alpha: Vector2<f64>, floor: f64) -> Result<()> {
    if alpha.norm() <= floor {
        return Err(Error::Domain(format!(
            "|alpha| = {} is within the exclusion radius {floor} of the zone centre",
            alpha.norm()
        )));
    }
    if alpha.iter().any(|a| a.abs() > PI + 1e-12) {
        return Err(Error::Domain("alpha must lie in [-pi, pi]^2".into()));
    }
    Ok(())
}

/// Exponential integral `E_1(z)` for `z > 0`.
pub fn exp_integral_e1(z: f64) -> f64 {
    if z <= 4.0 {
        entire_ein(z) - EULER_GAMMA - z.ln()
    } else {
        // modified Lentz continued fraction
        let tiny = 1e-300;
        let mut b = z + 1.0;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..200 {
            let a = -((i * i) as f64);
            b += 2.0;
            d = 1.0 / (a * d + b);
            c = b + a / c;
            let del = c * d;
            h *= del;
            if (del - 1.0).abs() < 1e-16 {
                break;
            }
        }
        h * (-z).exp()
    }
}

/// `Ein(z) = E_1(z) + ln z + gamma`, entire.
pub fn entire_ein(z: f64) -> f64 {
    if z > 4.0 {
        return exp_integral_e1(z) + z.ln() + EULER_GAMMA;
    }
    let mut term = 1.0;
    let mut sum = 0.0;
    for k in 1..80 {
        term *= -z / k as f64;
        let t = -term / k as f64;
        sum += t;
        if t.abs() < 1e-18 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

/// Ewald splitting parameter; balances both sums on the unit lattice.
fn ewald_eta() -> f64 {
    PI.sqrt()
}

struct Sums {
    l: Complex64,
    t: Matrix2<Complex64>,
    tail: f64,
}

/// Ewald sums for `L` and `T`. With `regular` the free-space singular part is
/// removed from the `n = 0` spatial term.
fn ewald_sums(x: Vector2<f64>, alpha: Vector2<f64>, eta: f64, m: usize, regular: bool) -> Sums {
    let a = 1.0 / (4.0 * eta * eta);
    let mi = m as i64;
    let mut l = Complex64::new(0.0, 0.0);
    let mut t = Matrix2::<Complex64>::zeros();
    let mut tail: f64 = 0.0;
    for q1 in -mi..=mi {
        for q2 in -mi..=mi {
            let shell = q1.abs().max(q2.abs()) == mi;
            // reciprocal part
            let xi = alpha + Vector2::new(q1 as f64, q2 as f64) * (2.0 * PI);
            let x2 = xi.norm_squared();
            let g = (-a * x2).exp();
            let ph = Complex64::from_polar(1.0, xi.dot(&x));
            let lq = ph * (g / x2);
            let tq = (xi * xi.transpose()).map(|v| ph * (v * g * (1.0 + a * x2) / (x2 * x2)));
            // spatial part
            let n = Vector2::new(q1 as f64, q2 as f64);
            let d = x - n;
            let r2 = d.norm_squared();
            let z = eta * eta * r2;
            let phase = Complex64::from_polar(1.0, n.dot(&alpha));
            let (ls, ts) = if q1 == 0 && q2 == 0 && regular {
                let base = entire_ein(z) - EULER_GAMMA - 2.0 * eta.ln();
                let dd = if r2 > 0.0 {
                    d * d.transpose() * (2.0 * (-(-z).exp_m1()) / r2)
                } else {
                    Matrix2::zeros()
                };
                (base / (4.0 * PI), (Matrix2::identity() * base + dd) / (8.0 * PI))
            } else {
                let e1 = exp_integral_e1(z);
                let dd = d * d.transpose() * (2.0 * (-z).exp() / r2);
                (e1 / (4.0 * PI), (Matrix2::identity() * e1 - dd) / (8.0 * PI))
            };
            let ls = phase * ls;
            let ts = ts.map(|v| phase * v);
            if shell {
                tail = tail.max(lq.norm() + ls.norm()).max(tq.norm() + ts.norm());
            }
            l += lq + ls;
            t += tq + ts;
        }
    }
    Sums { l, t, tail }
}

fn combine(s: &Sums, medium: &ElasticMedium) -> Matrix2<Complex64> {
    let inv_mu = 1.0 / medium.mu;
    let diff = 1.0 / medium.p_modulus() - inv_mu;
    -(Matrix2::identity() * (s.l * inv_mu) + s.t * c64(diff))
}

fn converged_sums(x: Vector2<f64>, alpha: Vector2<f64>, truncation: usize, regular: bool) -> Result<Sums> {
    let eta = ewald_eta();
    let mut m = truncation.max(1);
    loop {
        let s = ewald_sums(x, alpha, eta, m, regular);
        if s.tail < TAIL_TOLERANCE {
            return Ok(s);
        }
        if m >= 4 * truncation.max(2) {
            return Err(Error::Truncation {
                tail: s.tail,
                tol: TAIL_TOLERANCE,
            });
        }
        m += 1;
    }
}

/// `G^{alpha,0}(x) = sum_n G^0(x - n) e^{i n.alpha}` for `x` off the lattice.
pub fn green_quasiperiodic_static(
    x: Vector2<f64>,
    alpha: Vector2<f64>,
    medium: &ElasticMedium,
    truncation: usize,
) -> Result<Matrix2<Complex64>> {
    check_alpha(alpha, DEFAULT_ALPHA_FLOOR)?;
    let nearest = x.map(|v| v - v.round());
    if nearest.norm() < 1e-12 {
        return Err(Error::Domain("x lies on the lattice".into()));
    }
    Ok(combine(&converged_sums(x, alpha, truncation, false)?, medium))
}

/// Smooth remainder `Lambda^alpha(x) = G^{alpha,0}(x) - G^0(x)`, valid at
/// `x = 0`.
pub fn lambda_alpha(
    x: Vector2<f64>,
    alpha: Vector2<f64>,
    medium: &ElasticMedium,
    truncation: usize,
) -> Result<Matrix2<Complex64>> {
    check_alpha(alpha, DEFAULT_ALPHA_FLOOR)?;
    Ok(combine(&converged_sums(x, alpha, truncation, true)?, medium))
}

fn check_scale(s: f64, radius: f64) -> Result<()> {
    if !(s > 0.0 && s <= MAX_SCALE) || s * radius > MAX_SCALE {
        return Err(Error::Config(format!(
            "scaled disk of radius {} does not fit the cell with margin (scale {s} must lie in (0, {MAX_SCALE}])",
            s * radius
        )));
    }
    Ok(())
}

/// Nyström matrix of `S^{alpha,0}` on `s dD`: the free-space part uses the
/// log-corrected rule and `Lambda^alpha` the plain trapezoid rule.
pub fn assemble_s_alpha(
    scale: f64,
    boundary: &DiskBoundary,
    alpha: Vector2<f64>,
    medium: &ElasticMedium,
) -> Result<DenseOperator> {
    check_scale(scale, boundary.radius)?;
    check_alpha(alpha, DEFAULT_ALPHA_FLOOR)?;
    let bs = boundary.scaled(scale)?;
    let mut op = assemble_s(&bs, c64(0.0), medium)?;
    let n = bs.n_nodes;
    let w = c64(bs.weight());
    let blocks: Vec<Result<Matrix2<Complex64>>> = (0..n * n)
        .into_par_iter()
        .map(|q| {
            let (i, j) = (q / n, q % n);
            lambda_alpha(bs.nodes[i] - bs.nodes[j], alpha, medium, DEFAULT_TRUNCATION)
        })
        .collect();
    for (q, blk) in blocks.into_iter().enumerate() {
        let (i, j) = (q / n, q % n);
        let blk = blk?;
        for a in 0..2 {
            for b in 0..2 {
                op.matrix[(2 * i + a, 2 * j + b)] += blk[(a, b)] * w;
            }
        }
    }
    op.kind = OperatorKind::S;
    Ok(op)
}

/// `Q^alpha_ij = -int (S^{alpha,0})^{-1}[e_i] . e_j dsigma` on `s dD`.
pub fn matrix_q_alpha(
    scale: f64,
    boundary: &DiskBoundary,
    alpha: Vector2<f64>,
    medium: &ElasticMedium,
) -> Result<Matrix2<Complex64>> {
    let op = assemble_s_alpha(scale, boundary, alpha, medium)?;
    let n = boundary.n_nodes;
    let rhs = CMatrix::from_fn(2 * n, 2, |r, c| if r % 2 == c { c64(1.0) } else { c64(0.0) });
    let x = solve_many(&op.matrix, &rhs).map_err(|e| Error::Config(format!("S^alpha is singular: {e}")))?;
    let w = boundary.weight() * scale;
    Ok(Matrix2::from_fn(|i, j| {
        -(0..n).map(|k| x[(2 * k + j, i)]).sum::<Complex64>() * w
    }))
}

/// Constant part of `beta_s` with its `ln s` term removed, minus `Lambda^alpha(0)`.
pub fn pi_kernel(scale: f64, alpha: Vector2<f64>, medium: &ElasticMedium) -> Result<Matrix2<Complex64>> {
    let c = beta(c64(scale), medium)? - medium.tau1() / (2.0 * PI) * scale.ln();
    Ok(Matrix2::identity() * c - lambda_alpha(Vector2::zeros(), alpha, medium, DEFAULT_TRUNCATION)?)
}

/// Spectral norm of `(S-hat^s_D)^{-1} Pi` on the unscaled disk.
pub fn pi_contraction_norm(
    scale: f64,
    boundary: &DiskBoundary,
    alpha: Vector2<f64>,
    medium: &ElasticMedium,
) -> Result<f64> {
    let sh = assemble_s_hat(boundary, c64(scale), medium)?;
    let k = pi_kernel(scale, alpha, medium)?;
    let n = boundary.n_nodes;
    let w = c64(boundary.weight());
    let pi = CMatrix::from_fn(2 * n, 2 * n, |r, c| k[(r % 2, c % 2)] * w);
    let x = solve_many(&sh.matrix, &pi)?;
    Ok(spectral_norm(&x))
}

/// `t = 1 / (tau1 R ln R - tau2 R / 2 + 2 pi R beta_s)`.
pub fn dilute_t(scale: f64, radius: f64, medium: &ElasticMedium) -> Result<Complex64> {
    let den = beta(c64(scale), medium)? * (2.0 * PI * radius) + translation_eigenvalue(radius, medium);
    if den.norm() == 0.0 {
        return Err(Error::Singular("dilute denominator vanishes".into()));
    }
    Ok(den.inv())
}

/// `Re sqrt(-2 t epsilon / (rho R s^2))`.
pub fn dilute_omega(scale: f64, radius: f64, medium: &ElasticMedium, epsilon: f64) -> Result<f64> {
    let t = dilute_t(scale, radius, medium)?;
    Ok((-t * 2.0 * epsilon / (medium.rho * radius * scale * scale)).sqrt().re)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BandgapMode {
    Full,
    Dilute,
}

/// Eigenvalues of one `Q^alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaSample {
    pub alpha: Vector2<f64>,
    pub q_alpha: Matrix2<Complex64>,
    pub eigenvalues: [f64; 2],
    /// `|Q - Q^H| / 2`.
    pub anti_hermitian: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandgapResult {
    pub omega_star: f64,
    pub mode: BandgapMode,
    /// Maximising sample (full mode).
    pub q_alpha: Option<Matrix2<Complex64>>,
    pub eigenvalues: Option<[f64; 2]>,
    pub samples: Vec<AlphaSample>,
    /// Dilute constant `t` (dilute mode).
    pub t: Option<Complex64>,
    pub warnings: Vec<String>,
}

/// `points x points` cell-centred grid over `[-pi, pi]^2` without the disk
/// `|alpha| <= floor`, in row-major order.
pub fn alpha_grid(points: usize, floor: f64) -> Vec<Vector2<f64>> {
    let h = 2.0 * PI / points as f64;
    let mut out = Vec::with_capacity(points * points);
    for a in 0..points {
        for b in 0..points {
            let v = Vector2::new(-PI + (a as f64 + 0.5) * h, -PI + (b as f64 + 0.5) * h);
            if v.norm() > floor {
                out.push(v);
            }
        }
    }
    out
}

/// Eigenvalues of the Hermitian part in ascending order.
pub fn hermitian_eigenvalues(q: &Matrix2<Complex64>) -> ([f64; 2], f64) {
    let h = (q + q.adjoint()) * c64(0.5);
    let anti = spectral_norm(&CMatrix::from_fn(2, 2, |i, j| (q[(i, j)] - q[(j, i)].conj()) * 0.5));
    let (a, d) = (h[(0, 0)].re, h[(1, 1)].re);
    let b = h[(0, 1)].norm();
    let mid = 0.5 * (a + d);
    let rad = (0.25 * (a - d) * (a - d) + b * b).sqrt();
    ([mid - rad, mid + rad], anti)
}

fn regime_warning(scale: f64, epsilon: f64) -> Option<String> {
    let v = epsilon / (scale * scale * scale.ln().abs());
    (v > 0.1).then(|| format!("epsilon / (s^2 |ln s|) = {v:.3e} is not small"))
}

/// `sqrt(epsilon max_alpha lambda_max(Q^alpha) / (rho |s D|))` and the
/// maximising sample.
pub fn omega_star_from_samples<'a>(
    samples: &'a [AlphaSample],
    scale: f64,
    radius: f64,
    medium: &ElasticMedium,
    epsilon: f64,
) -> Result<(f64, &'a AlphaSample)> {
    let best = samples
        .iter()
        .max_by(|a, b| a.eigenvalues[1].total_cmp(&b.eigenvalues[1]))
        .ok_or_else(|| Error::Config("empty alpha grid".into()))?;
    let lam = best.eigenvalues[1];
    if lam <= 0.0 {
        return Err(Error::Singular("no positive eigenvalue of Q^alpha on the grid".into()));
    }
    let area = PI * (scale * radius).powi(2);
    Ok(((lam / (medium.rho * area) * epsilon).sqrt(), best))
}

/// Bandgap edge by the full `Q^alpha` maximisation or the dilute formula.
pub fn bandgap_edge(
    scale: f64,
    boundary: &DiskBoundary,
    medium: &ElasticMedium,
    contrast: &ContrastParams,
    mode: BandgapMode,
    alphas: &[Vector2<f64>],
) -> Result<BandgapResult> {
    check_scale(scale, boundary.radius)?;
    let mut warnings: Vec<String> = regime_warning(scale, contrast.epsilon).into_iter().collect();
    match mode {
        BandgapMode::Dilute => {
            let t = dilute_t(scale, boundary.radius, medium)?;
            Ok(BandgapResult {
                omega_star: dilute_omega(scale, boundary.radius, medium, contrast.epsilon)?,
                mode,
                q_alpha: None,
                eigenvalues: None,
                samples: Vec::new(),
                t: Some(t),
                warnings,
            })
        }
        BandgapMode::Full => {
            if alphas.is_empty() {
                return Err(Error::Config("empty alpha grid".into()));
            }
            let samples: Vec<AlphaSample> = alphas
                .par_iter()
                .map(|&alpha| {
                    let q = matrix_q_alpha(scale, boundary, alpha, medium)?;
                    let (eigenvalues, anti) = hermitian_eigenvalues(&q);
                    Ok(AlphaSample {
                        alpha,
                        q_alpha: q,
                        eigenvalues,
                        anti_hermitian: anti,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let worst_anti = samples.iter().map(|s| s.anti_hermitian).fold(0.0, f64::max);
            if worst_anti > 1e-8 {
                warnings.push(format!("Q^alpha anti-Hermitian residue {worst_anti:.2e}; Hermitian part used"));
            }
            let (omega_star, best) = omega_star_from_samples(&samples, scale, boundary.radius, medium, contrast.epsilon)?;
            Ok(BandgapResult {
                omega_star,
                mode,
                q_alpha: Some(best.q_alpha),
                eigenvalues: Some(best.eigenvalues),
                samples,
                t: None,
                warnings,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::make_disk;
    use crate::kernels::green::green_static;

    #[test]
    fn e1_values() {
        // E1(1) and E1(5) from standard tables
        assert!((exp_integral_e1(1.0) - 0.219_383_934_395_520_3).abs() < 1e-14);
        assert!((exp_integral_e1(5.0) - 0.001_148_295_591_275_326).abs() < 1e-16);
        assert!((exp_integral_e1(0.01) - 4.037_929_576_538_114).abs() < 1e-13);
        assert!((entire_ein(4.0) - EULER_GAMMA - 4f64.ln() - exp_integral_e1(4.0)).abs() < 1e-13);
        assert!((exp_integral_e1(4.0 + 1e-12) - exp_integral_e1(4.0)).abs() < 1e-13);
    }

    #[test]
    fn ewald_parameter_independence() {
        let m = ElasticMedium::new(1.3, 0.8, 1.0).unwrap();
        let alpha = Vector2::new(1.1, -0.7);
        for x in [Vector2::new(0.2, 0.1), Vector2::new(-0.45, 0.3), Vector2::new(0.05, -0.02)] {
            let a = combine(&ewald_sums(x, alpha, PI.sqrt(), 6, false), &m);
            let b = combine(&ewald_sums(x, alpha, 2.5, 8, false), &m);
            let c = combine(&ewald_sums(x, alpha, 1.2, 8, false), &m);
            assert!((a - b).norm() < 1e-11, "{}", (a - b).norm());
            assert!((a - c).norm() < 1e-11, "{}", (a - c).norm());
        }
    }

    #[test]
    fn quasi_periodicity() {
        let m = ElasticMedium::unit();
        let alpha = Vector2::new(2.0, 0.9);
        let x = Vector2::new(0.31, -0.22);
        let g = green_quasiperiodic_static(x, alpha, &m, DEFAULT_TRUNCATION).unwrap();
        for (e, a) in [(Vector2::new(1.0, 0.0), alpha[0]), (Vector2::new(0.0, 1.0), alpha[1])] {
            let gs = green_quasiperiodic_static(x + e, alpha, &m, DEFAULT_TRUNCATION).unwrap();
            assert!((gs - g * Complex64::from_polar(1.0, a)).norm() < 1e-10);
        }
        let gc = green_quasiperiodic_static(x, -alpha, &m, DEFAULT_TRUNCATION).unwrap();
        assert!((gc - g.map(|v| v.conj())).norm() < 1e-12);
    }

    #[test]
    fn remainder_is_smooth_at_origin() {
        let m = ElasticMedium::new(2.0, 0.7, 1.0).unwrap();
        let alpha = Vector2::new(-1.5, 2.2);
        let l0 = lambda_alpha(Vector2::zeros(), alpha, &m, DEFAULT_TRUNCATION).unwrap();
        for h in [1e-2, 1e-3] {
            let x = Vector2::new(h, 0.5 * h);
            let g = green_quasiperiodic_static(x, alpha, &m, DEFAULT_TRUNCATION).unwrap();
            let diff = g - green_static(x, &m).unwrap();
            let l = lambda_alpha(x, alpha, &m, DEFAULT_TRUNCATION).unwrap();
            assert!((diff - l).norm() < 1e-10);
            assert!((l - l0).norm() < 10.0 * h);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let m = ElasticMedium::unit();
        let b = make_disk(1.0, 16).unwrap();
        assert!(green_quasiperiodic_static(Vector2::new(0.1, 0.1), Vector2::new(0.1, 0.1), &m, 4).is_err());
        assert!(green_quasiperiodic_static(Vector2::new(1.0, 0.0), Vector2::new(1.0, 1.0), &m, 4).is_err());
        assert!(assemble_s_alpha(0.5, &b, Vector2::new(1.0, 1.0), &m).is_err());
    }

    #[test]
    fn q_alpha_is_hermitian() {
        let m = ElasticMedium::unit();
        let b = make_disk(1.0, 32).unwrap();
        let q = matrix_q_alpha(0.1, &b, Vector2::new(1.3, -2.1), &m).unwrap();
        let (_, anti) = hermitian_eigenvalues(&q);
        assert!(anti < 1e-8 * q.norm(), "{anti}");
    }

    #[test]
    fn dilute_t_example() {
        let m = ElasticMedium::unit();
        let t = dilute_t(0.01, 1.0, &m).unwrap();
        let b = beta(c64(0.01), &m).unwrap();
        let b1 = beta(c64(0.1), &m).unwrap();
        let shift = 10f64.ln() * (4.0 / 3.0) / (4.0 * PI);
        assert!((b.re - (b1.re - shift)).abs() < 1e-14);
        assert!((b.re + 0.488_969).abs() < 1e-6);
        assert!((b.im + 1.0 / 6.0).abs() < 1e-15);
        let e = (Complex64::new(-1.0 / 6.0, 0.0) + Complex64::new(b.re, -1.0 / 6.0) * (2.0 * PI)).inv();
        assert!((t - e).norm() < 1e-14);
    }

    #[test]
    fn omega_scales_with_sqrt_epsilon() {
        let m = ElasticMedium::unit();
        let w1 = dilute_omega(0.1, 1.0, &m, 1e-4).unwrap();
        let w2 = dilute_omega(0.1, 1.0, &m, 1e-6).unwrap();
        assert!((w1 / w2 - 10.0).abs() < 1e-12);
    }

    #[test]
    fn alpha_grid_excludes_centre() {
        let g = alpha_grid(16, DEFAULT_ALPHA_FLOOR);
        assert_eq!(g.len(), 252);
        assert!(g.iter().all(|a| a.norm() > DEFAULT_ALPHA_FLOOR));
    }
}
