//! The transmission system `A(omega, delta)`, its resonance roots, the forced
//! scattering problem and far-field patterns.

use std::f64::consts::PI;

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boundary::{basis_f, inner_product, BoundaryField, DiskBoundary};
use crate::core_types::{wave_context, ContrastParams, ElasticMedium};
use crate::disk_spectral::{
    classify_case, kernel_coeffs, matrices_qp, matrices_qp_published, KernelBasisCoeffs, QPMatrices,
};
use crate::kernels::expansion::ExpansionCoefficients;
use crate::kernels::far::far_kernel;
use crate::layer_ops::{assemble_kstar, assemble_s, assemble_s_hat, eval_field, Side};
use crate::linalg::{condition_number, singular_values, solve, CMatrix, CVector};
use crate::{Error, Result};

fn c64(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Dense discretisation of the `2 x 2` block operator acting on `(phi, varphi)`.
#[derive(Debug, Clone)]
pub struct SystemOperator {
    pub matrix: CMatrix,
    pub omega: Complex64,
    pub delta: f64,
    pub k_interior: Complex64,
    pub k_exterior: Complex64,
    pub n_nodes: usize,
}

impl SystemOperator {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}

fn place(target: &mut CMatrix, block: &CMatrix, row: usize, col: usize, scale: Complex64) {
    let n = block.nrows();
    target.view_mut((row, col), (n, n)).zip_apply(block, |t, b| *t += b * scale);
}

fn add_identity(target: &mut CMatrix, row: usize, col: usize, n: usize, c: Complex64) {
    for i in 0..n {
        target[(row + i, col + i)] += c;
    }
}

fn check_omega(omega: Complex64) -> Result<()> {
    if omega.norm() == 0.0 || !omega.re.is_finite() || !omega.im.is_finite() {
        return Err(Error::Domain("omega must be finite and nonzero".into()));
    }
    Ok(())
}

/// `[[S^{k_i}, -S^{k_e}], [-1/2 + K^{k_i,*}, -delta (1/2 + K^{k_e,*})]]`.
pub fn assemble_system(
    omega: Complex64,
    contrast: &ContrastParams,
    b: &DiskBoundary,
    medium: &ElasticMedium,
) -> Result<SystemOperator> {
    check_omega(omega)?;
    let ctx = wave_context(omega, medium, contrast.tau);
    let (ki, ke) = (ctx.k_interior, ctx.k_exterior);
    let n2 = 2 * b.n_nodes;
    let si = assemble_s(b, ki, medium)?;
    let se = assemble_s(b, ke, medium)?;
    let kiop = assemble_kstar(b, ki, medium)?;
    let keop = assemble_kstar(b, ke, medium)?;
    let mut a = CMatrix::zeros(2 * n2, 2 * n2);
    let one = c64(1.0);
    let d = c64(contrast.delta);
    place(&mut a, &si.matrix, 0, 0, one);
    place(&mut a, &se.matrix, 0, n2, -one);
    place(&mut a, &kiop.matrix, n2, 0, one);
    add_identity(&mut a, n2, 0, n2, c64(-0.5));
    place(&mut a, &keop.matrix, n2, n2, -d);
    add_identity(&mut a, n2, n2, n2, -d * 0.5);
    Ok(SystemOperator {
        matrix: a,
        omega,
        delta: contrast.delta,
        k_interior: ki,
        k_exterior: ke,
        n_nodes: b.n_nodes,
    })
}

/// Leading operator `[[S-hat^{k_i}, -S-hat^{k_e}], [-1/2 + K*_D, 0]]`.
pub fn assemble_a0(
    omega: Complex64,
    contrast: &ContrastParams,
    b: &DiskBoundary,
    medium: &ElasticMedium,
) -> Result<CMatrix> {
    check_omega(omega)?;
    let ctx = wave_context(omega, medium, contrast.tau);
    let n2 = 2 * b.n_nodes;
    let si = assemble_s_hat(b, ctx.k_interior, medium)?;
    let se = assemble_s_hat(b, ctx.k_exterior, medium)?;
    let k0 = assemble_kstar(b, c64(0.0), medium)?;
    let mut a = CMatrix::zeros(2 * n2, 2 * n2);
    place(&mut a, &si.matrix, 0, 0, c64(1.0));
    place(&mut a, &se.matrix, 0, n2, c64(-1.0));
    place(&mut a, &k0.matrix, n2, 0, c64(1.0));
    add_identity(&mut a, n2, 0, n2, c64(-0.5));
    Ok(a)
}

fn stack(top: &BoundaryField, bottom: &BoundaryField) -> CVector {
    let (t, u) = (top.to_vector(), bottom.to_vector());
    CVector::from_iterator(t.len() + u.len(), t.iter().chain(u.iter()).copied())
}

fn split(v: &CVector) -> Result<(BoundaryField, BoundaryField)> {
    let h = v.len() / 2;
    Ok((
        BoundaryField::from_vector(&v.rows(0, h).into_owned())?,
        BoundaryField::from_vector(&v.rows(h, h).into_owned())?,
    ))
}

/// Kernel vectors `Psi_i = b_i (f_i, a_i f_i)` and adjoint kernel vectors
/// `Phi_i = (0, f_i)` as matrix columns.
pub fn kernel_vectors(b: &DiskBoundary, coeffs: &KernelBasisCoeffs) -> (CMatrix, CMatrix) {
    let f = basis_f(b);
    let zero = BoundaryField::zeros(b.n_nodes);
    let psi: Vec<CVector> = (0..3)
        .map(|i| stack(f.get(i), &f.get(i).scale(coeffs.a[i])) * c64(coeffs.b[i]))
        .collect();
    let phi: Vec<CVector> = (0..3).map(|i| stack(&zero, f.get(i))).collect();
    (CMatrix::from_columns(&psi), CMatrix::from_columns(&phi))
}

/// `A_0 + M` with `M[psi] = sum_i <psi, Psi_i> Phi_i`.
pub fn assemble_a0_tilde(
    omega: Complex64,
    contrast: &ContrastParams,
    b: &DiskBoundary,
    medium: &ElasticMedium,
) -> Result<CMatrix> {
    let mut a = assemble_a0(omega, contrast, b, medium)?;
    let case = classify_case(b.radius, medium, None);
    let coeffs = kernel_coeffs(omega, b.radius, medium, contrast, &case)?;
    let (psi, phi) = kernel_vectors(b, &coeffs);
    let w = c64(b.weight());
    a += &phi * (psi.adjoint() * w);
    Ok(a)
}

/// Which closed forms enter the resonance equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClosedForms {
    /// Values that agree with the discretised operators.
    Consistent,
    /// Reference closed forms.
    Published,
}

/// Whether `a_i` follows the iterate or stays at its initial value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AConvention {
    Live,
    Frozen,
}

/// Damped Newton settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub max_iterations: usize,
    /// Residual target relative to `epsilon`.
    pub tolerance: f64,
    pub forms: ClosedForms,
    pub a_convention: AConvention,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            max_iterations: 200,
            tolerance: 1e-12,
            forms: ClosedForms::Consistent,
            a_convention: AConvention::Live,
        }
    }
}

fn qp_for(forms: ClosedForms, radius: f64, medium: &ElasticMedium) -> QPMatrices {
    match forms {
        ClosedForms::Consistent => matrices_qp(radius, medium),
        ClosedForms::Published => matrices_qp_published(radius, medium, &ExpansionCoefficients::new(medium)),
    }
}

fn a_coefficient(
    omega: Complex64,
    i: usize,
    radius: f64,
    medium: &ElasticMedium,
    contrast: &ContrastParams,
) -> Result<Complex64> {
    let case = classify_case(radius, medium, None);
    Ok(kernel_coeffs(omega, radius, medium, contrast, &case)?.a[i - 1])
}

fn residual_with(
    omega: Complex64,
    i: usize,
    qp: &QPMatrices,
    a: Complex64,
    medium: &ElasticMedium,
    contrast: &ContrastParams,
) -> Complex64 {
    let rho = medium.rho;
    let q = qp.q_ii(i);
    let p = qp.p_ii(i);
    let w2 = omega * omega;
    let shift = (rho.sqrt() * contrast.tau).ln();
    w2 * omega.ln() * (rho * q) + w2 * rho * (p + shift * q) - a * contrast.epsilon
}

fn check_index(i: usize) -> Result<()> {
    if !(1..=3).contains(&i) {
        return Err(Error::Domain(format!("mode index {i} outside 1..=3")));
    }
    Ok(())
}

/// `rho w^2 ln w Q_ii + rho w^2 (ln(sqrt(rho) tau) Q_ii + P_ii) - epsilon a_i`
/// with operator-consistent `Q`, `P` and `a_i` evaluated at `omega`.
pub fn resonance_residual(
    omega: Complex64,
    i: usize,
    radius: f64,
    medium: &ElasticMedium,
    contrast: &ContrastParams,
) -> Result<Complex64> {
    check_omega(omega)?;
    check_index(i)?;
    let qp = matrices_qp(radius, medium);
    let a = a_coefficient(omega, i, radius, medium, contrast)?;
    Ok(residual_with(omega, i, &qp, a, medium, contrast))
}

/// How a root was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RootMethod {
    LeadingOrder,
    SvdDip,
}

/// Multiplicity of a root.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Multiplicity {
    Simple,
    /// The translation modes `i = 1, 2` share one root.
    DegeneratePair,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResonanceResult {
    pub index: usize,
    pub omega_hat: Complex64,
    pub residual: f64,
    pub multiplicity: Multiplicity,
    pub method: RootMethod,
    pub iterations: usize,
}

/// Real dominant balance with two fixed-point corrections of the logarithm.
fn initial_guess(i: usize, qp: &QPMatrices, a: Complex64, medium: &ElasticMedium, contrast: &ContrastParams) -> f64 {
    let rho = medium.rho;
    let eps = contrast.epsilon;
    let q = qp.q_ii(i);
    let p = qp.p_ii(i);
    let shift = (rho.sqrt() * contrast.tau).ln();
    if q == 0.0 {
        return (eps * a.norm() / (rho * p.norm())).sqrt();
    }
    let mut w = (eps * a.norm() / (rho * q.abs() * eps.ln().abs())).sqrt();
    for _ in 0..2 {
        let bracket = (q * (w.ln() + shift) + p).norm();
        w = (eps * a.norm() / (rho * bracket)).sqrt();
    }
    w
}

fn newton(
    i: usize,
    radius: f64,
    medium: &ElasticMedium,
    contrast: &ContrastParams,
    cfg: &SolverConfig,
) -> Result<(Complex64, f64, usize)> {
    let qp = qp_for(cfg.forms, radius, medium);
    let eps = contrast.epsilon;
    let w0 = initial_guess(i, &qp, a_coefficient(c64(eps.sqrt()), i, radius, medium, contrast)?, medium, contrast);
    let frozen = a_coefficient(c64(w0), i, radius, medium, contrast)?;
    let f = |w: Complex64| -> Result<Complex64> {
        let a = match cfg.a_convention {
            AConvention::Live => a_coefficient(w, i, radius, medium, contrast)?,
            AConvention::Frozen => frozen,
        };
        Ok(residual_with(w, i, &qp, a, medium, contrast))
    };
    let target = cfg.tolerance * eps;
    let mut w = c64(w0);
    let mut fw = f(w)?;
    let mut best = (w, fw.norm());
    for it in 0..cfg.max_iterations {
        if fw.norm() <= target {
            return Ok((w, fw.norm(), it));
        }
        let h = w * 1e-6;
        let df = (f(w + h)? - f(w - h)?) / (h * 2.0);
        if df.norm() == 0.0 {
            break;
        }
        let step = fw / df;
        let mut t = 1.0;
        loop {
            let trial = w - step * t;
            if trial.norm() > 0.0 {
                let ft = f(trial)?;
                if ft.norm() < fw.norm() || t < 1e-6 {
                    w = trial;
                    fw = ft;
                    break;
                }
            }
            t *= 0.5;
        }
        if fw.norm() < best.1 {
            best = (w, fw.norm());
        }
    }
    if fw.norm() <= target {
        return Ok((w, fw.norm(), cfg.max_iterations));
    }
    Err(Error::Solver {
        iterations: cfg.max_iterations,
        best: best.0,
        residual: best.1,
    })
}

/// The three leading-order resonance roots; the translation pair is solved
/// once and reported for `i = 1` and `i = 2`.
pub fn solve_resonances(
    radius: f64,
    medium: &ElasticMedium,
    contrast: &ContrastParams,
    cfg: &SolverConfig,
) -> Result<Vec<ResonanceResult>> {
    medium.validate()?;
    let (w1, r1, it1) = newton(1, radius, medium, contrast, cfg)?;
    let (w3, r3, it3) = newton(3, radius, medium, contrast, cfg)?;
    let pair = |index| ResonanceResult {
        index,
        omega_hat: w1,
        residual: r1,
        multiplicity: Multiplicity::DegeneratePair,
        method: RootMethod::LeadingOrder,
        iterations: it1,
    };
    Ok(vec![
        pair(1),
        pair(2),
        ResonanceResult {
            index: 3,
            omega_hat: w3,
            residual: r3,
            multiplicity: Multiplicity::Simple,
            method: RootMethod::LeadingOrder,
            iterations: it3,
        },
    ])
}

/// Local minimum of the smallest singular value of the full system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SvdDip {
    pub omega: Complex64,
    pub sigma_min: f64,
    pub evaluations: usize,
}

/// Smallest singular value of `A(omega, delta)`.
pub fn sigma_min(omega: Complex64, contrast: &ContrastParams, b: &DiskBoundary, medium: &ElasticMedium) -> Result<f64> {
    let a = assemble_system(omega, contrast, b, medium)?;
    Ok(*singular_values(&a.matrix).last().expect("nonempty"))
}

/// Compass search in the complex plane for a local minimum of the smallest
/// singular value, started at `start` with step `0.05 |start|`.
pub fn svd_dip(
    start: Complex64,
    contrast: &ContrastParams,
    b: &DiskBoundary,
    medium: &ElasticMedium,
) -> Result<SvdDip> {
    check_omega(start)?;
    let mut h = 0.05 * start.norm();
    let stop = 1e-5 * start.norm();
    let mut w = start;
    let mut s = sigma_min(w, contrast, b, medium)?;
    let mut evals = 1;
    let dirs = [c64(1.0), c64(-1.0), Complex64::i(), -Complex64::i()];
    while h > stop && evals < 400 {
        let trials: Vec<Complex64> = dirs.iter().map(|d| w + d * h).collect();
        let values: Vec<Result<f64>> = trials.par_iter().map(|t| sigma_min(*t, contrast, b, medium)).collect();
        evals += 4;
        let mut improved = false;
        for (t, v) in trials.iter().zip(values) {
            let v = v?;
            if v < s {
                s = v;
                w = *t;
                improved = true;
            }
        }
        if !improved {
            h *= 0.5;
        }
    }
    Ok(SvdDip {
        omega: w,
        sigma_min: s,
        evaluations: evals,
    })
}

/// Regimes of the interior amplification, keyed by `|omega^2 ln omega| / epsilon`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    /// `|omega^2 ln omega| << epsilon`.
    Quasistatic,
    /// `|omega^2 ln omega| = O(epsilon)`.
    Resonant,
    /// `epsilon << |omega^2 ln omega| << 1`.
    Beyond,
}

/// Bands separating the regimes and the conditioning limit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScatterConfig {
    pub lower_band: f64,
    pub upper_band: f64,
    pub condition_limit: f64,
}

impl Default for ScatterConfig {
    fn default() -> Self {
        Self {
            lower_band: 0.1,
            upper_band: 10.0,
            condition_limit: 1e14,
        }
    }
}

/// `|omega^2 ln omega| / epsilon`.
pub fn regime_ratio(omega: Complex64, epsilon: f64) -> f64 {
    (omega * omega * omega.ln()).norm() / epsilon
}

pub fn classify_regime(ratio: f64, cfg: &ScatterConfig) -> Regime {
    if ratio < cfg.lower_band {
        Regime::Quasistatic
    } else if ratio <= cfg.upper_band {
        Regime::Resonant
    } else {
        Regime::Beyond
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScatterSolution {
    pub omega: Complex64,
    pub direction: Vector2<f64>,
    /// Interior density `phi`.
    pub interior: BoundaryField,
    /// Exterior density `varphi`.
    pub exterior: BoundaryField,
    /// Coefficients of the interior trace on `f^(i)`.
    pub xi: [Complex64; 3],
    /// `2 pi R <varphi, f^(i)>`, `i = 1, 2`.
    pub zeta: [Complex64; 2],
    pub regime: Regime,
    pub regime_ratio: f64,
    /// Relative residual of the dense solve.
    pub residual: f64,
    pub condition: f64,
    pub warning: Option<String>,
}

/// Boundary data `(u_in, delta d_nu u_in)` of the compressional plane wave
/// `d e^{i k_p x.d}`.
pub fn incident_rhs(
    omega: Complex64,
    direction: Vector2<f64>,
    contrast: &ContrastParams,
    b: &DiskBoundary,
    medium: &ElasticMedium,
) -> CVector {
    let kp = wave_context(omega, medium, contrast.tau).k_p;
    let d = direction.map(c64);
    let ik = Complex64::i() * kp;
    let trace = BoundaryField::from_fn(b.n_nodes, |j| d * (ik * b.nodes[j].dot(&direction)).exp());
    let traction = BoundaryField::from_fn(b.n_nodes, |j| {
        let nu = b.normals[j];
        let e = (ik * b.nodes[j].dot(&direction)).exp();
        let v = nu * medium.lambda + direction * (2.0 * medium.mu * direction.dot(&nu));
        v.map(c64) * (ik * e * contrast.delta)
    });
    stack(&trace, &traction)
}

/// Plane-wave incidence: dense solve, interior coefficients and regime tag.
pub fn solve_scattering(
    omega: Complex64,
    direction: Vector2<f64>,
    contrast: &ContrastParams,
    b: &DiskBoundary,
    medium: &ElasticMedium,
    cfg: &ScatterConfig,
) -> Result<ScatterSolution> {
    check_omega(omega)?;
    if (direction.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::Domain("direction must be a unit vector".into()));
    }
    let sys = assemble_system(omega, contrast, b, medium)?;
    let rhs = incident_rhs(omega, direction, contrast, b, medium);
    let x = solve(&sys.matrix, &rhs)?;
    let residual = (&sys.matrix * &x - &rhs).norm() / rhs.norm();
    let condition = condition_number(&sys.matrix);
    let warning = (condition > cfg.condition_limit)
        .then(|| format!("near resonance: condition number {condition:e} exceeds {:e}", cfg.condition_limit));
    let (interior, exterior) = split(&x)?;
    let trace = assemble_s(b, sys.k_interior, medium)?.apply(&interior);
    let f = basis_f(b);
    let mut xi = [c64(0.0); 3];
    for (i, v) in xi.iter_mut().enumerate() {
        *v = inner_product(&trace, f.get(i), b)?;
    }
    let l = c64(2.0 * PI * b.radius);
    let zeta = [
        inner_product(&exterior, &f.f1, b)? * l,
        inner_product(&exterior, &f.f2, b)? * l,
    ];
    let ratio = regime_ratio(omega, contrast.epsilon);
    Ok(ScatterSolution {
        omega,
        direction,
        interior,
        exterior,
        xi,
        zeta,
        regime: classify_regime(ratio, cfg),
        regime_ratio: ratio,
        residual,
        condition,
        warning,
    })
}

/// Independent scattering solves, evaluated in parallel and returned in input
/// order.
pub fn scatter_sweep(
    points: &[(Complex64, ContrastParams)],
    direction: Vector2<f64>,
    b: &DiskBoundary,
    medium: &ElasticMedium,
    cfg: &ScatterConfig,
) -> Vec<Result<ScatterSolution>> {
    points
        .par_iter()
        .map(|(w, c)| solve_scattering(*w, direction, c, b, medium, cfg))
        .collect()
}

/// Far-field patterns of the scattered field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FarField {
    pub angles: Vec<f64>,
    /// Longitudinal pattern from the full exterior density.
    pub u_p: Vec<Vector2<Complex64>>,
    /// Transverse pattern from the full exterior density.
    pub u_s: Vec<Vector2<Complex64>>,
    /// Leading-order patterns assembled from `zeta`.
    pub u_p_leading: Vec<Vector2<Complex64>>,
    pub u_s_leading: Vec<Vector2<Complex64>>,
    pub radii: Vec<f64>,
    /// `|u_sc(r xhat) - (u_p e^{i k_p r} + u_s e^{i k_s r}) / sqrt r| r^{3/2}`,
    /// indexed by radius then angle.
    pub decay_residual: Vec<Vec<f64>>,
}

impl FarField {
    /// Largest `|xhat x u_p| / |u_p|` and `|xhat . u_s| / |u_s|` over the angles.
    pub fn projector_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for ((t, p), s) in self.angles.iter().zip(&self.u_p).zip(&self.u_s) {
            let xh = Vector2::new(t.cos(), t.sin()).map(c64);
            let cross = (p[0] * xh[1] - p[1] * xh[0]).norm() / p.norm().max(f64::MIN_POSITIVE);
            let dot = (s[0] * xh[0] + s[1] * xh[1]).norm() / s.norm().max(f64::MIN_POSITIVE);
            worst = worst.max(cross).max(dot);
        }
        worst
    }
}

/// Evaluates the far-field patterns at `angles` and the decay residual at
/// `radii`, each required to exceed `5 R`.
pub fn far_field(
    sol: &ScatterSolution,
    b: &DiskBoundary,
    medium: &ElasticMedium,
    angles: &[f64],
    radii: &[f64],
) -> Result<FarField> {
    if let Some(r) = radii.iter().find(|r| **r <= 5.0 * b.radius) {
        return Err(Error::Accuracy(format!("radius {r} is not beyond 5R = {}", 5.0 * b.radius)));
    }
    let omega = sol.omega;
    let ke = omega * medium.rho.sqrt();
    let kp = ke / medium.p_modulus().sqrt();
    let ks = ke / medium.mu.sqrt();
    let w = c64(b.weight());
    let mut u_p = Vec::with_capacity(angles.len());
    let mut u_s = Vec::with_capacity(angles.len());
    let mut u_p_leading = Vec::with_capacity(angles.len());
    let mut u_s_leading = Vec::with_capacity(angles.len());
    let lead = Vector2::new(sol.zeta[0], sol.zeta[1]) / c64((2.0 * PI * b.radius).sqrt());
    for t in angles {
        let xh = Vector2::new(t.cos(), t.sin());
        let mut p = Vector2::zeros();
        let mut s = Vector2::zeros();
        for (y, phi) in b.nodes.iter().zip(&sol.exterior.values) {
            let (kp_m, ks_m): (Matrix2<Complex64>, Matrix2<Complex64>) = far_kernel(xh, *y, omega, medium)?;
            p += kp_m * phi * w;
            s += ks_m * phi * w;
        }
        let (kp0, ks0) = far_kernel(xh, Vector2::zeros(), omega, medium)?;
        u_p.push(p);
        u_s.push(s);
        u_p_leading.push(kp0 * lead);
        u_s_leading.push(ks0 * lead);
    }
    let decay_residual = radii
        .iter()
        .map(|&r| {
            angles
                .iter()
                .enumerate()
                .map(|(a, t)| {
                    let xh = Vector2::new(t.cos(), t.sin());
                    let u = eval_field(Side::Exterior, &sol.exterior, xh * r, ke, b, medium)?;
                    let sq = r.sqrt();
                    let model = u_p[a] * ((Complex64::i() * kp * r).exp() / sq) + u_s[a] * ((Complex64::i() * ks * r).exp() / sq);
                    Ok((u - model).norm() * r.powf(1.5))
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FarField {
        angles: angles.to_vec(),
        u_p,
        u_s,
        u_p_leading,
        u_s_leading,
        radii: radii.to_vec(),
        decay_residual,
    })
}
