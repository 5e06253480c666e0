//! Verification suite shared by the integration tests and the `verify`
//! subcommand. Each check reports named parts with a metric, a threshold and
//! a verdict, plus its runtime against a budget.

use std::f64::consts::PI;
use std::time::Instant;

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::boundary::{basis_f, inner_product, make_disk, BoundaryField, DiskBoundary};
use crate::core_types::{wave_speeds, ContrastParams, ElasticMedium};
use crate::disk_spectral::{
    classify_case, kernel_coeffs, matrices_qp, matrices_qp_published, quadrature_qp, stilde_eigenvalue,
    stilde_eigenvalue_published, translation_eigenvalue,
};
use crate::kernels::expansion::{beta, eval_a, eval_b, ExpansionCoefficients};
use crate::kernels::green::{green_dynamic, green_static};
use crate::layer_ops::{
    assemble_expansion_op, assemble_kstar, assemble_s, assemble_s_hat, eval_traction, ExpansionKind, Side,
};
use crate::linalg::{extrapolate_to_zero, smallest_singular, spectral_norm, subspace_angle};
use crate::phononic::{
    alpha_grid, bandgap_edge, green_quasiperiodic_static, omega_star_from_samples, BandgapMode,
    DEFAULT_ALPHA_FLOOR, DEFAULT_TRUNCATION,
};
use crate::resonance_scattering::{
    assemble_a0, far_field, kernel_vectors, resonance_residual, solve_resonances, solve_scattering, svd_dip,
    Regime, ScatterConfig, SolverConfig,
};
use crate::{Error, Result};

fn c64(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Closed-form constants that can be perturbed to exercise failure reporting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClosedFormConstant {
    /// The eigenvalue `1/2` of the static Neumann–Poincaré operator.
    NeumannPoincare,
    /// The translation eigenvalue `tau1 R ln R - tau2 R / 2`.
    TranslationEigenvalue,
    /// The translation entry `Q_11`.
    QTranslation,
}

impl ClosedFormConstant {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "neumann-poincare" => Some(Self::NeumannPoincare),
            "translation-eigenvalue" => Some(Self::TranslationEigenvalue),
            "q-translation" => Some(Self::QTranslation),
            _ => None,
        }
    }
}

/// Relative perturbation of one closed-form constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Perturbation {
    pub constant: ClosedFormConstant,
    pub relative: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SuiteOptions {
    /// Criterion ids to run; all when `None`.
    pub only: Option<Vec<u8>>,
    pub perturbation: Option<Perturbation>,
}

impl SuiteOptions {
    fn factor(&self, which: ClosedFormConstant) -> f64 {
        match self.perturbation {
            Some(p) if p.constant == which => 1.0 + p.relative,
            _ => 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartReport {
    pub name: String,
    pub passed: bool,
    pub metric: f64,
    pub threshold: f64,
    pub detail: String,
}

impl PartReport {
    fn new(name: &str, passed: bool, metric: f64, threshold: f64, detail: String) -> Self {
        Self {
            name: name.into(),
            passed: passed && metric.is_finite(),
            metric,
            threshold,
            detail,
        }
    }

    fn below(name: &str, metric: f64, threshold: f64, detail: String) -> Self {
        Self::new(name, metric < threshold, metric, threshold, detail)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub id: u8,
    pub title: String,
    /// Stable topic string identifying the verified identity.
    pub anchor: String,
    pub passed: bool,
    pub parts: Vec<PartReport>,
    pub runtime_s: f64,
    pub budget_s: f64,
    pub error: Option<String>,
}

impl CheckReport {
    pub fn failed_parts(&self) -> impl Iterator<Item = &PartReport> {
        self.parts.iter().filter(|p| !p.passed)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub passed: bool,
    pub checks: Vec<CheckReport>,
    pub perturbation: Option<Perturbation>,
}

struct CheckDef {
    id: u8,
    title: &'static str,
    anchor: &'static str,
    budget_s: f64,
    run: fn(&SuiteOptions) -> Result<Vec<PartReport>>,
}

const CHECKS: [CheckDef; 10] = [
    CheckDef {
        id: 1,
        title: "disk single-layer eigen-identities",
        anchor: "single-layer-disk-eigenvalues",
        budget_s: 5.0,
        run: check_single_layer,
    },
    CheckDef {
        id: 2,
        title: "Neumann-Poincare eigenvalue on rigid motions",
        anchor: "neumann-poincare-rigid-motion-eigenspace",
        budget_s: 5.0,
        run: check_neumann_poincare,
    },
    CheckDef {
        id: 3,
        title: "conormal jump relations",
        anchor: "single-layer-traction-jump",
        budget_s: 10.0,
        run: check_jump,
    },
    CheckDef {
        id: 4,
        title: "low-frequency expansion order",
        anchor: "kupradze-low-frequency-expansion",
        budget_s: 10.0,
        run: check_expansion_order,
    },
    CheckDef {
        id: 5,
        title: "Q and P closed forms",
        anchor: "disk-q-p-diagonal-forms",
        budget_s: 30.0,
        run: check_qp,
    },
    CheckDef {
        id: 6,
        title: "kernel spaces of the leading operator",
        anchor: "leading-operator-kernel-basis",
        budget_s: 60.0,
        run: check_a0_kernel,
    },
    CheckDef {
        id: 7,
        title: "subwavelength resonance roots",
        anchor: "three-subwavelength-resonances",
        budget_s: 120.0,
        run: check_resonances,
    },
    CheckDef {
        id: 8,
        title: "interior amplification regimes",
        anchor: "interior-amplification-estimates",
        budget_s: 120.0,
        run: check_regimes,
    },
    CheckDef {
        id: 9,
        title: "far-field structure",
        anchor: "far-field-p-s-expansion",
        budget_s: 60.0,
        run: check_far_field,
    },
    CheckDef {
        id: 10,
        title: "quasi-periodicity and dilute bandgap",
        anchor: "phononic-bandgap-dilute-limit",
        budget_s: 300.0,
        run: check_bandgap,
    },
];

/// Ids of all checks in order.
pub fn check_ids() -> Vec<u8> {
    CHECKS.iter().map(|c| c.id).collect()
}

/// Runs one check by id.
pub fn run_check(id: u8, opts: &SuiteOptions) -> Result<CheckReport> {
    let check = CHECKS
        .iter()
        .find(|c| c.id == id)
        .ok_or_else(|| Error::Config(format!("unknown check id {id}")))?;
    let start = Instant::now();
    let outcome = (check.run)(opts);
    let runtime_s = start.elapsed().as_secs_f64();
    let (parts, error) = match outcome {
        Ok(p) => (p, None),
        Err(e) => (Vec::new(), Some(e.to_string())),
    };
    let passed = error.is_none() && !parts.is_empty() && parts.iter().all(|p| p.passed) && runtime_s <= check.budget_s;
    Ok(CheckReport {
        id: check.id,
        title: check.title.into(),
        anchor: check.anchor.into(),
        passed,
        parts,
        runtime_s,
        budget_s: check.budget_s,
        error,
    })
}

/// Runs the selected checks sequentially.
pub fn run_suite(opts: &SuiteOptions) -> Result<SuiteReport> {
    let ids = opts.only.clone().unwrap_or_else(check_ids);
    let checks = ids.iter().map(|&id| run_check(id, opts)).collect::<Result<Vec<_>>>()?;
    Ok(SuiteReport {
        passed: checks.iter().all(|c| c.passed),
        checks,
        perturbation: opts.perturbation,
    })
}

fn nodewise_error(u: &BoundaryField, v: &BoundaryField, scale: f64) -> f64 {
    u.values
        .iter()
        .zip(&v.values)
        .map(|(a, b)| (a - b * c64(scale)).norm())
        .fold(0.0, f64::max)
}

fn l2_norm(u: &BoundaryField, b: &DiskBoundary) -> Result<f64> {
    Ok(inner_product(u, u, b)?.re.sqrt())
}

fn check_single_layer(opts: &SuiteOptions) -> Result<Vec<PartReport>> {
    let m = ElasticMedium::new(1.0, 1.0, 1.0)?;
    let factor = opts.factor(ClosedFormConstant::TranslationEigenvalue);
    let (mut trans, mut rot, mut rot_consistent) = (0.0f64, 0.0f64, 0.0f64);
    for r in [0.5, 1.0, 2.0] {
        let b = make_disk(r, 256)?;
        let s = assemble_s(&b, c64(0.0), &m)?;
        let f = basis_f(&b);
        let lt = translation_eigenvalue(r, &m) * factor;
        for i in 0..2 {
            trans = trans.max(nodewise_error(&s.apply(f.get(i)), f.get(i), lt));
        }
        let sf3 = s.apply(&f.f3);
        rot = rot.max(nodewise_error(&sf3, &f.f3, stilde_eigenvalue_published(3, r, &m)?));
        rot_consistent = rot_consistent.max(nodewise_error(&sf3, &f.f3, stilde_eigenvalue(3, r, &m)?));
    }
    Ok(vec![
        PartReport::below("translations", trans, 1e-8, "max nodewise error over R in {0.5, 1, 2}, n = 256".into()),
        PartReport::below(
            "rotation",
            rot,
            1e-8,
            format!("against -tau1 R / 2; against -R / (2 mu) the error is {rot_consistent:.2e}"),
        ),
    ])
}

fn check_neumann_poincare(opts: &SuiteOptions) -> Result<Vec<PartReport>> {
    let half = 0.5 * opts.factor(ClosedFormConstant::NeumannPoincare);
    let mut worst = [0.0f64; 3];
    for (m, r) in [
        (ElasticMedium::new(1.0, 1.0, 1.0)?, 1.0),
        (ElasticMedium::new(2.0, 0.9, 1.3)?, 0.7),
        (ElasticMedium::new(0.5, 1.7, 2.0)?, 2.3),
    ] {
        let b = make_disk(r, 256)?;
        let k = assemble_kstar(&b, c64(0.0), &m)?;
        let f = basis_f(&b);
        for (i, w) in worst.iter_mut().enumerate() {
            let kf = k.apply(f.get(i));
            let diff = BoundaryField::from_fn(b.n_nodes, |j| kf.values[j] - f.get(i).values[j] * c64(half));
            *w = w.max(l2_norm(&diff, &b)?);
        }
    }
    Ok((0..3)
        .map(|i| {
            PartReport::below(
                &format!("f{}", i + 1),
                worst[i],
                1e-8,
                "L2 norm of K* f - f / 2 over three media, n = 256".into(),
            )
        })
        .collect())
}

/// Trigonometric density of degree 4 with seeded coefficients decaying as
/// `1 / (1 + q)`.
fn random_density(rng: &mut ChaCha8Rng, b: &DiskBoundary) -> BoundaryField {
    let mut coef = [[Complex64::new(0.0, 0.0); 2]; 18];
    for (q, c) in coef.iter_mut().enumerate() {
        let decay = 1.0 / (1.0 + (q / 2) as f64);
        for v in c.iter_mut() {
            *v = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)) * decay;
        }
    }
    BoundaryField::from_fn(b.n_nodes, |j| {
        let t = b.angles[j];
        let mut v = Vector2::zeros();
        for q in 0..9 {
            let (cs, sn) = ((q as f64 * t).cos(), (q as f64 * t).sin());
            for a in 0..2 {
                v[a] += coef[2 * q][a] * cs + coef[2 * q + 1][a] * sn;
            }
        }
        v
    })
}

fn check_jump(_: &SuiteOptions) -> Result<Vec<PartReport>> {
    let m = ElasticMedium::new(1.4, 0.8, 1.0)?;
    let b = make_disk(1.0, 64)?;
    let fine = make_disk(1.0, 4096)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let hs: Vec<f64> = (1..=8).map(|q| 0.01 * q as f64).collect();
    let (mut jump, mut ext_err, mut int_err) = (0.0f64, 0.0f64, 0.0f64);
    let densities: Vec<BoundaryField> = (0..10).map(|_| random_density(&mut rng, &b)).collect();
    let targets: Vec<usize> = (0..10).map(|_| rng.random_range(0..b.n_nodes)).collect();
    for &kk in &[0.0, 0.05] {
        let k = c64(kk);
        let kst = assemble_kstar(&b, k, &m)?;
        for (phi, &i) in densities.iter().zip(&targets) {
            let kphi = kst.apply(phi);
            let phf = phi.resample(fine.n_nodes);
            let x = b.nodes[i];
            let nu = b.normals[i];
            let limit = |side: Side, sign: f64| -> Result<Vector2<Complex64>> {
                let vals = hs
                    .iter()
                    .map(|h| eval_traction(side, &phf, x + nu * (sign * h), nu, k, &fine, &m))
                    .collect::<Result<Vec<_>>>()?;
                Ok(extrapolate_to_zero(&hs, &vals))
            };
            let ext = limit(Side::Exterior, 1.0)?;
            let int = limit(Side::Interior, -1.0)?;
            let p = phi.values[i];
            let scale = p.norm();
            jump = jump.max((ext - int - p).norm() / scale);
            ext_err = ext_err.max((ext - (kphi.values[i] + p * c64(0.5))).norm() / scale);
            int_err = int_err.max((int - (kphi.values[i] - p * c64(0.5))).norm() / scale);
        }
    }
    let detail = "10 seeded densities, k in {0, 0.05}, one-sided limits by extrapolation";
    Ok(vec![
        PartReport::below("exterior minus interior", jump, 1e-6, detail.into()),
        PartReport::below("exterior trace", ext_err, 1e-6, "against K* phi + phi / 2".into()),
        PartReport::below("interior trace", int_err, 1e-6, "against K* phi - phi / 2".into()),
    ])
}

fn expansion_threshold() -> f64 {
    2e-4 * (1e-2f64.ln() / 1e-1f64.ln()).abs() * 10.0
}

fn check_expansion_order(_: &SuiteOptions) -> Result<Vec<PartReport>> {
    let threshold = expansion_threshold();
    let mut kernel = 0.0f64;
    for m in [ElasticMedium::new(2.5, 0.7, 1.0)?, ElasticMedium::new(1.0, 1.0, 1.0)?] {
        let co = ExpansionCoefficients::new(&m);
        for t in [0.3, 1.2, 2.9] {
            let x = Vector2::new(f64::cos(t), f64::sin(t));
            let rem = |k: f64| -> Result<f64> {
                let kc = c64(k);
                let g = green_dynamic(x, kc, &m)?;
                let e = green_static(x, &m)?
                    + Matrix2::identity() * beta(kc, &m)?
                    + eval_a(x, &m) * (kc * kc * kc.ln())
                    + eval_b(x, &m, &co)? * (kc * kc);
                Ok((g - e).norm())
            };
            kernel = kernel.max(rem(1e-2)? / rem(1e-1)?);
        }
    }
    let m = ElasticMedium::new(1.4, 0.8, 1.0)?;
    let b = make_disk(1.1, 64)?;
    let s1 = assemble_expansion_op(&b, ExpansionKind::S1, &m).matrix;
    let s2 = assemble_expansion_op(&b, ExpansionKind::S2, &m).matrix;
    let k1 = assemble_expansion_op(&b, ExpansionKind::K1star, &m).matrix;
    let k2 = assemble_expansion_op(&b, ExpansionKind::K2star, &m).matrix;
    let k0 = assemble_kstar(&b, c64(0.0), &m)?.matrix;
    let rem = |kk: f64| -> Result<(f64, f64)> {
        let k = c64(kk);
        let l = k * k * k.ln();
        let k2c = k * k;
        let rs = assemble_s(&b, k, &m)?.matrix
            - assemble_s_hat(&b, k, &m)?.matrix
            - s1.map(|v| v * l)
            - s2.map(|v| v * k2c);
        let rk = assemble_kstar(&b, k, &m)?.matrix - &k0 - k1.map(|v| v * l) - k2.map(|v| v * k2c);
        Ok((spectral_norm(&rs), spectral_norm(&rk)))
    };
    let (a1, b1) = rem(1e-1)?;
    let (a2, b2) = rem(1e-2)?;
    Ok(vec![
        PartReport::below(
            "kernel",
            kernel,
            threshold,
            "worst r(1e-2) / r(1e-1) at |x| = 1 over two media and three directions".into(),
        ),
        PartReport::below("single layer", a2 / a1, threshold, format!("r(1e-1) = {a1:.2e}, r(1e-2) = {a2:.2e}")),
        PartReport::below(
            "Neumann-Poincare",
            b2 / b1,
            threshold,
            format!("r(1e-1) = {b1:.2e}, r(1e-2) = {b2:.2e}"),
        ),
    ])
}

fn check_qp(opts: &SuiteOptions) -> Result<Vec<PartReport>> {
    let factor = opts.factor(ClosedFormConstant::QTranslation);
    let rel = |a: Complex64, b: Complex64| (a - b).norm() / b.norm().max(f64::MIN_POSITIVE);
    let (mut q1, mut q3, mut p1, mut p3, mut off) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let (mut q3c, mut p3c) = (0.0f64, 0.0f64);
    let mut spot_quad = 0.0;
    for (m, r) in [
        (ElasticMedium::new(1.0, 1.0, 1.0)?, 1.0),
        (ElasticMedium::new(2.0, 0.9, 1.3)?, 0.7),
        (ElasticMedium::new(0.5, 1.7, 2.0)?, 2.3),
    ] {
        let b = make_disk(r, 256)?;
        let (qn, pn) = quadrature_qp(&b, &m);
        let reference = matrices_qp_published(r, &m, &ExpansionCoefficients::new(&m));
        let consistent = matrices_qp(r, &m);
        for i in 0..2 {
            q1 = q1.max(rel(qn[(i, i)], c64(reference.q[(i, i)] * factor)));
            p1 = p1.max(rel(pn[(i, i)], reference.p[(i, i)]));
        }
        q3 = q3.max(rel(qn[(2, 2)], c64(reference.q[(2, 2)])));
        p3 = p3.max(rel(pn[(2, 2)], reference.p[(2, 2)]));
        q3c = q3c.max((qn[(2, 2)] - consistent.q[(2, 2)]).norm() / (r * r));
        p3c = p3c.max(rel(pn[(2, 2)], consistent.p[(2, 2)]));
        let dq = (0..3).map(|i| qn[(i, i)].norm()).fold(0.0, f64::max);
        let dp = (0..3).map(|i| pn[(i, i)].norm()).fold(0.0, f64::max);
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    off = off.max(qn[(i, j)].norm() / dq).max(pn[(i, j)].norm() / dp);
                }
            }
        }
        if r == 1.0 && m.lambda == 1.0 && m.mu == 1.0 {
            spot_quad = qn[(0, 0)].re;
        }
    }
    let unit = ElasticMedium::new(1.0, 1.0, 1.0)?;
    let spot = matrices_qp_published(1.0, &unit, &ExpansionCoefficients::new(&unit)).q[(0, 0)] * factor;
    let spot_err = (spot + 1.0 / 3.0).abs().max((spot_quad + 1.0 / 3.0).abs());
    Ok(vec![
        PartReport::below("Q translation diagonal", q1, 1e-6, "relative, three media, n = 256".into()),
        PartReport::below(
            "Q rotation diagonal",
            q3,
            1e-6,
            format!("relative; quadrature against zero differs by {q3c:.2e} R^2"),
        ),
        PartReport::below("P translation diagonal", p1, 1e-6, "relative, three media, n = 256".into()),
        PartReport::below(
            "P rotation diagonal",
            p3,
            1e-6,
            format!("relative; against R^2 / (8 mu) the error is {p3c:.2e}"),
        ),
        PartReport::below("off-diagonals", off, 1e-8, "relative to the largest diagonal entry".into()),
        PartReport::below(
            "Q11 spot value",
            spot_err,
            1e-10,
            format!("closed form {spot:.12}, quadrature {spot_quad:.12}, expected -1/3"),
        ),
    ])
}

fn check_a0_kernel(_: &SuiteOptions) -> Result<Vec<PartReport>> {
    let m = ElasticMedium::new(1.0, 1.0, 1.0)?;
    let c = ContrastParams::from_epsilon_tau(1e-3, 1.0)?;
    let w = c64(0.05);
    let mut sigmas = Vec::new();
    let mut norms = Vec::new();
    let mut angles = (0.0, 0.0);
    for n in [32, 64] {
        let b = make_disk(1.0, n)?;
        let a0 = assemble_a0(w, &c, &b, &m)?;
        let (vals, right, left) = smallest_singular(&a0, 3);
        norms.push(spectral_norm(&a0));
        sigmas.push(vals);
        if n == 64 {
            let case = classify_case(b.radius, &m, None);
            let coeffs = kernel_coeffs(w, b.radius, &m, &c, &case)?;
            let (psi, phi) = kernel_vectors(&b, &coeffs);
            angles = (subspace_angle(&right, &psi), subspace_angle(&left, &phi));
        }
    }
    let floor = 1e-13 * norms[1];
    let decays = (0..3).all(|i| sigmas[1][i] <= sigmas[0][i] / 4.0 || sigmas[1][i] <= floor);
    Ok(vec![
        PartReport::new(
            "singular value decay",
            decays,
            sigmas[1][2],
            floor,
            format!(
                "n = 32: {:.2e} {:.2e} {:.2e}; n = 64: {:.2e} {:.2e} {:.2e}; \
                 accepted when reduced 4x or below 1e-13 |A0|",
                sigmas[0][0], sigmas[0][1], sigmas[0][2], sigmas[1][0], sigmas[1][1], sigmas[1][2]
            ),
        ),
        PartReport::below("right kernel alignment", angles.0, 1e-5, "sine of the largest principal angle to Psi".into()),
        PartReport::below("left kernel alignment", angles.1, 1e-5, "sine of the largest principal angle to Phi".into()),
    ])
}

fn check_resonances(_: &SuiteOptions) -> Result<Vec<PartReport>> {
    let m = ElasticMedium::new(1.0, 1.0, 1.0)?;
    let b = make_disk(1.0, 64)?;
    let (mut res, mut pair) = (0.0f64, 0.0f64);
    let mut ranges = [(f64::INFINITY, 0.0f64); 2];
    let mut dip = 0.0f64;
    let mut dips = Vec::new();
    for eps in [1e-3, 1e-4, 1e-5] {
        let c = ContrastParams::from_epsilon_tau(eps, 1.0)?;
        let roots = solve_resonances(1.0, &m, &c, &SolverConfig::default())?;
        for r in &roots {
            let v = resonance_residual(r.omega_hat, r.index, 1.0, &m, &c)?;
            res = res.max(v.norm() / eps);
            let w = r.omega_hat;
            let ratio = w.norm_sqr() * w.ln().norm() / eps;
            let slot = &mut ranges[usize::from(r.index == 3)];
            *slot = (slot.0.min(ratio), slot.1.max(ratio));
        }
        pair = pair.max((roots[0].omega_hat - roots[1].omega_hat).norm() / roots[0].omega_hat.norm());
        for r in [&roots[0], &roots[2]] {
            let d = svd_dip(r.omega_hat, &c, &b, &m)?;
            let e = (d.omega - r.omega_hat).norm() / r.omega_hat.norm();
            dips.push(format!("{eps:e}/{}: {e:.2e}", r.index));
            dip = dip.max(e);
        }
    }
    let lo = ranges[0].0.min(ranges[1].0);
    let hi = ranges[0].1.max(ranges[1].1);
    Ok(vec![
        PartReport::below("a: residual", res, 1e-12, "max |residual| / epsilon over the sweep".into()),
        PartReport::below("b: translation pair", pair, 1e-14, "relative gap between roots 1 and 2".into()),
        PartReport::new(
            "c: scaling",
            lo >= 0.5 && hi <= 2.0,
            hi,
            2.0,
            format!(
                "|w|^2 |ln w| / epsilon over [{:.3}, {:.3}] for the translation pair and [{:.3}, {:.3}] \
                 for the rotation root, required within [0.5, 2]",
                ranges[0].0, ranges[0].1, ranges[1].0, ranges[1].1
            ),
        ),
        PartReport::below(
            "d: singular-value dip",
            dip,
            0.05,
            format!("relative distance from the root, n = 64 ({})", dips.join(", ")),
        ),
    ])
}

fn check_regimes(_: &SuiteOptions) -> Result<Vec<PartReport>> {
    let m = ElasticMedium::new(1.0, 1.0, 1.0)?;
    let b = make_disk(1.0, 64)?;
    let eps = 1e-4;
    let c = ContrastParams::from_epsilon_tau(eps, 1.0)?;
    let cfg = ScatterConfig::default();
    let d = Vector2::new(1.0, 0.0);
    let sweep = [
        (1e-4, Regime::Quasistatic),
        (3e-4, Regime::Quasistatic),
        (1e-3, Regime::Quasistatic),
        (2e-3, Regime::Resonant),
        (3e-3, Regime::Resonant),
        (5e-3, Regime::Resonant),
        (7e-3, Regime::Resonant),
        (1e-2, Regime::Resonant),
        (1.5e-2, Regime::Resonant),
        (2e-2, Regime::Beyond),
        (3e-2, Regime::Beyond),
        (5e-2, Regime::Beyond),
        (1e-1, Regime::Beyond),
    ];
    let mut tags_ok = true;
    let mut by = [Vec::new(), Vec::new(), Vec::new()];
    for (w, expected) in sweep {
        let s = solve_scattering(c64(w), d, &c, &b, &m, &cfg)?;
        tags_ok &= s.regime == expected;
        let xi = s.xi.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        let slot = match expected {
            Regime::Quasistatic => 0,
            Regime::Resonant => 1,
            Regime::Beyond => 2,
        };
        by[slot].push((w, xi));
    }
    let q = &by[0];
    let qmax = q.iter().map(|v| v.1).fold(0.0, f64::max);
    let qmin = q.iter().map(|v| v.1).fold(f64::INFINITY, f64::min);
    let scaled: Vec<f64> = by[1].iter().map(|(w, x)| x / w.ln().abs()).collect();
    let (slo, shi) = scaled.iter().fold((f64::INFINITY, 0.0f64), |(a, b), v| (a.min(*v), b.max(*v)));
    let beyond = &by[2];
    let monotone = beyond.windows(2).all(|p| p[1].1 < p[0].1);
    let decay = beyond.last().expect("nonempty").1 / beyond[0].1;
    Ok(vec![
        PartReport::new("regime tags", tags_ok, 0.0, 0.0, format!("epsilon = {eps:e}, 13 frequencies")),
        PartReport::below(
            "quasistatic bounded",
            qmax / qmin,
            2.0,
            format!("|xi| within [{qmin:.3}, {qmax:.3}] over a decade of omega"),
        ),
        PartReport::new(
            "resonant log growth",
            slo >= 0.2 && shi <= 5.0,
            shi,
            5.0,
            format!("|xi| / |ln omega| ranges over [{slo:.3}, {shi:.3}], required within [0.2, 5]"),
        ),
        PartReport::new(
            "beyond decay",
            monotone && decay < 0.1,
            decay,
            0.1,
            format!("strictly decreasing: {monotone}; last / first = {decay:.3e}"),
        ),
    ])
}

fn check_far_field(_: &SuiteOptions) -> Result<Vec<PartReport>> {
    let m = ElasticMedium::new(1.0, 1.0, 1.0)?;
    let b = make_disk(1.0, 64)?;
    let c = ContrastParams::from_epsilon_tau(1e-2, 1.0)?;
    let w = 1.0;
    let s = solve_scattering(c64(w), Vector2::new(1.0, 0.0), &c, &b, &m, &ScatterConfig::default())?;
    let (cs, cp) = wave_speeds(&m);
    let beat = 2.0 * PI / (w / cs - w / cp).abs();
    let angles = [0.0, 0.7, 1.9, 3.1, 4.4];
    let mut defect = 0.0f64;
    let mut env = Vec::new();
    for r0 in [20.0, 40.0, 80.0] {
        let radii: Vec<f64> = (0..24).map(|q| r0 * b.radius + beat * q as f64 / 24.0).collect();
        let ff = far_field(&s, &b, &m, &angles, &radii)?;
        defect = defect.max(ff.projector_defect());
        env.push(ff.decay_residual.iter().flatten().copied().fold(0.0, f64::max));
    }
    let (lo, hi) = env.iter().fold((f64::INFINITY, 0.0f64), |(a, b), v| (a.min(*v), b.max(*v)));
    Ok(vec![
        PartReport::below("p/s orthogonality", defect, 1e-10, "relative projector defect, five angles".into()),
        PartReport::below(
            "r^(3/2) residual",
            (hi - lo) / hi,
            0.25,
            format!(
                "envelopes over one beat period at 20R, 40R, 80R: {:.3} {:.3} {:.3}",
                env[0], env[1], env[2]
            ),
        ),
    ])
}

fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

fn check_bandgap(_: &SuiteOptions) -> Result<Vec<PartReport>> {
    let m = ElasticMedium::new(1.0, 1.0, 1.0)?;
    let mut qp = 0.0f64;
    for alpha in [Vector2::new(1.3, -2.1), Vector2::new(-0.4, 0.9), Vector2::new(3.0, 3.0)] {
        for x in [Vector2::new(0.23, -0.31), Vector2::new(-0.45, 0.12)] {
            let g = green_quasiperiodic_static(x, alpha, &m, DEFAULT_TRUNCATION)?;
            for (e, a) in [(Vector2::new(1.0, 0.0), alpha[0]), (Vector2::new(0.0, 1.0), alpha[1])] {
                let gs = green_quasiperiodic_static(x + e, alpha, &m, DEFAULT_TRUNCATION)?;
                qp = qp.max((gs - g * Complex64::from_polar(1.0, a)).norm() / g.norm());
            }
        }
    }
    let b = make_disk(1.0, 64)?;
    let eps = 1e-5;
    let c = ContrastParams::from_epsilon_tau(eps, 1.0)?;
    let grid = alpha_grid(16, DEFAULT_ALPHA_FLOOR);
    let mut gaps = Vec::new();
    let mut last = None;
    for s in [0.2, 0.1, 0.05] {
        let full = bandgap_edge(s, &b, &m, &c, BandgapMode::Full, &grid)?;
        let dil = bandgap_edge(s, &b, &m, &c, BandgapMode::Dilute, &grid)?;
        gaps.push((full.omega_star - dil.omega_star).abs() / dil.omega_star);
        last = Some((s, full));
    }
    let monotone = gaps.windows(2).all(|p| p[1] < p[0]);
    let (s, full) = last.expect("three scales");
    let epsilons = [1e-5, 1e-6, 1e-7, 1e-8];
    let omegas = epsilons
        .iter()
        .map(|&e| omega_star_from_samples(&full.samples, s, b.radius, &m, e).map(|v| v.0))
        .collect::<Result<Vec<_>>>()?;
    let slope = loglog_slope(&epsilons, &omegas);
    Ok(vec![
        PartReport::below("quasi-periodicity", qp, 1e-8, "relative shift error over three alpha, two points".into()),
        PartReport::new(
            "dilute agreement",
            monotone,
            gaps[2],
            gaps[1],
            format!(
                "relative full/dilute gap at s = 0.2, 0.1, 0.05: {:.3} {:.3} {:.3}",
                gaps[0], gaps[1], gaps[2]
            ),
        ),
        PartReport::below(
            "epsilon scaling",
            (slope - 0.5).abs(),
            0.01,
            format!("log-log slope {slope:.6} over epsilon in [1e-8, 1e-5] at s = {s}"),
        ),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_constants() {
        assert_eq!(ClosedFormConstant::parse("neumann-poincare"), Some(ClosedFormConstant::NeumannPoincare));
        assert_eq!(ClosedFormConstant::parse("nope"), None);
    }

    #[test]
    fn unknown_id_is_rejected() {
        assert!(run_check(11, &SuiteOptions::default()).is_err());
    }

    #[test]
    fn perturbation_fails_the_named_check() {
        let opts = SuiteOptions {
            only: Some(vec![2]),
            perturbation: Some(Perturbation {
                constant: ClosedFormConstant::NeumannPoincare,
                relative: 1e-3,
            }),
        };
        let r = run_suite(&opts).unwrap();
        assert!(!r.passed);
        assert_eq!(r.checks[0].anchor, "neumann-poincare-rigid-motion-eigenspace");
    }

    #[test]
    fn slope_of_power_law() {
        let x = [1.0, 10.0, 100.0];
        let y: Vec<f64> = x.iter().map(|v: &f64| 3.0 * v.powf(0.5)).collect();
        assert!((loglog_slope(&x, &y) - 0.5).abs() < 1e-14);
    }
}
