//! Subcommand implementations. Sweep points run in parallel and are merged in
//! sweep order before anything is written.

use lame_resonance::acceptance::{run_suite, SuiteOptions, SuiteReport};
use lame_resonance::boundary::make_disk;
use lame_resonance::disk_spectral::{classify_case, CaseTag};
use lame_resonance::phononic::{alpha_grid, bandgap_edge, BandgapMode, BandgapResult};
use lame_resonance::resonance_scattering::{
    far_field, solve_resonances, solve_scattering, svd_dip, Multiplicity, Regime, ResonanceResult, RootMethod,
    ScatterConfig, ScatterSolution, SolverConfig,
};
use nalgebra::Vector2;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{Format, RunConfig};
use crate::output::{cvec, write_csv, write_json, Cplx};
use crate::CliError;

fn num(v: f64) -> String {
    format!("{v:e}")
}

/// Configurations of a sweep in order, or the single base configuration.
fn points(cfg: &RunConfig) -> Result<Vec<(Option<f64>, RunConfig)>, CliError> {
    match &cfg.sweep {
        None => Ok(vec![(None, cfg.clone())]),
        Some(s) => s
            .values()
            .into_iter()
            .map(|v| {
                let mut c = cfg.clone();
                c.sweep = None;
                c.set(&s.param, v)?;
                c.validate()?;
                Ok((Some(v), c))
            })
            .collect(),
    }
}

fn sweep_param(cfg: &RunConfig) -> &str {
    cfg.sweep.as_ref().map_or("value", |s| s.param.as_str())
}

fn format_of(cfg: &RunConfig) -> Format {
    cfg.format
        .unwrap_or(if cfg.sweep.is_some() { Format::Csv } else { Format::Json })
}

#[derive(Debug, Serialize, Deserialize)]
pub struct RootRecord {
    pub index: usize,
    pub omega: Cplx,
    pub residual: f64,
    pub multiplicity: Multiplicity,
    pub method: RootMethod,
    pub iterations: usize,
    pub svd_dip: Option<DipRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct DipRecord {
    pub omega: Cplx,
    pub sigma_min: f64,
    pub relative_distance: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ResonanceBody {
    pub case: CaseTag,
    pub roots: Vec<RootRecord>,
}

fn resonance_run(cfg: &RunConfig) -> Result<ResonanceBody, CliError> {
    let m = cfg.medium()?;
    let c = cfg.contrast()?;
    let r = cfg.geometry.radius;
    let roots = solve_resonances(r, &m, &c, &SolverConfig::default())?;
    let dips = if cfg.resonances.svd_check {
        let b = make_disk(r, cfg.resonances.svd_nodes)?;
        let simple: Vec<&ResonanceResult> = roots.iter().filter(|x| x.index != 2).collect();
        let found = simple
            .par_iter()
            .map(|x| svd_dip(x.omega_hat, &c, &b, &m))
            .collect::<Result<Vec<_>, _>>()?;
        Some(found)
    } else {
        None
    };
    let records = roots
        .iter()
        .map(|x| {
            let dip = dips.as_ref().map(|d| {
                let d = if x.index == 3 { d[1] } else { d[0] };
                DipRecord {
                    omega: d.omega.into(),
                    sigma_min: d.sigma_min,
                    relative_distance: (d.omega - x.omega_hat).norm() / x.omega_hat.norm(),
                }
            });
            RootRecord {
                index: x.index,
                omega: x.omega_hat.into(),
                residual: x.residual,
                multiplicity: x.multiplicity,
                method: x.method,
                iterations: x.iterations,
                svd_dip: dip,
            }
        })
        .collect();
    Ok(ResonanceBody {
        case: classify_case(r, &m, None),
        roots: records,
    })
}

pub fn resonances(cfg: &RunConfig) -> Result<(), CliError> {
    let pts = points(cfg)?;
    let runs = pts
        .par_iter()
        .map(|(_, c)| resonance_run(c))
        .collect::<Result<Vec<_>, _>>()?;
    match format_of(cfg) {
        Format::Json if cfg.sweep.is_none() => write_json(cfg, runs.into_iter().next().expect("one point")),
        Format::Json => {
            let rows: Vec<SweepEntry<ResonanceBody>> = pts
                .iter()
                .zip(runs)
                .map(|((v, _), body)| SweepEntry { value: v.unwrap_or(0.0), result: body })
                .collect();
            write_json(cfg, SweepBody { param: sweep_param(cfg).into(), points: rows })
        }
        Format::Csv => {
            let mut rows = Vec::new();
            for ((v, c), body) in pts.iter().zip(&runs) {
                for root in &body.roots {
                    let mut row = Vec::new();
                    if cfg.sweep.as_ref().is_some_and(|s| s.param != "epsilon") {
                        row.push(num(v.unwrap_or(0.0)));
                    }
                    row.extend([
                        num(c.contrast.epsilon),
                        num(root.omega.re),
                        num(root.omega.im),
                        num(root.residual),
                        root.index.to_string(),
                    ]);
                    rows.push(row);
                }
            }
            let mut header = Vec::new();
            if cfg.sweep.as_ref().is_some_and(|s| s.param != "epsilon") {
                header.push(sweep_param(cfg));
            }
            header.extend(["epsilon", "re_omega", "im_omega", "residual", "index"]);
            write_csv(cfg, &header, &rows)
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SweepEntry<T> {
    pub value: f64,
    pub result: T,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SweepBody<T> {
    pub param: String,
    pub points: Vec<SweepEntry<T>>,
}

fn direction(cfg: &RunConfig) -> Vector2<f64> {
    let t = cfg.scatter.direction_deg.to_radians();
    Vector2::new(t.cos(), t.sin())
}

fn omega(cfg: &RunConfig) -> Complex64 {
    Complex64::new(cfg.scatter.omega[0], cfg.scatter.omega[1])
}

fn scatter_solve(cfg: &RunConfig) -> Result<(ScatterSolution, lame_resonance::boundary::DiskBoundary), CliError> {
    let m = cfg.medium()?;
    let c = cfg.contrast()?;
    let b = make_disk(cfg.geometry.radius, cfg.geometry.n_nodes)?;
    let sc = ScatterConfig {
        condition_limit: cfg.scatter.condition_limit,
        ..ScatterConfig::default()
    };
    let sol = solve_scattering(omega(cfg), direction(cfg), &c, &b, &m, &sc)?;
    Ok((sol, b))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ScatterBody {
    pub omega: Cplx,
    pub direction: [f64; 2],
    pub regime: Regime,
    pub regime_ratio: f64,
    pub xi: [Cplx; 3],
    pub xi_norm: f64,
    pub zeta: [Cplx; 2],
    pub residual: f64,
    pub condition: f64,
    pub warning: Option<String>,
}

impl From<&ScatterSolution> for ScatterBody {
    fn from(s: &ScatterSolution) -> Self {
        Self {
            omega: s.omega.into(),
            direction: [s.direction[0], s.direction[1]],
            regime: s.regime,
            regime_ratio: s.regime_ratio,
            xi: [s.xi[0].into(), s.xi[1].into(), s.xi[2].into()],
            xi_norm: s.xi.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt(),
            zeta: [s.zeta[0].into(), s.zeta[1].into()],
            residual: s.residual,
            condition: s.condition,
            warning: s.warning.clone(),
        }
    }
}

/// Real `omega < e^{-1/2}` with `omega^2 |ln omega| = target`.
pub fn omega_for_ratio(target: f64) -> Result<f64, CliError> {
    if !(target > 0.0 && target < 0.5 / std::f64::consts::E) {
        return Err(CliError::Config(format!(
            "omega^2 |ln omega| = {target:e} is not attainable below omega = e^(-1/2)"
        )));
    }
    let mut w: f64 = target.sqrt();
    for _ in 0..200 {
        w = (target / w.ln().abs()).sqrt();
    }
    Ok(w)
}

/// One frequency per regime at ratios `1e-2`, `1` and `1e2` of `epsilon`.
pub fn three_regime_preset(cfg: &RunConfig) -> Result<Vec<RunConfig>, CliError> {
    [1e-2, 1.0, 1e2]
        .iter()
        .map(|r| {
            let mut c = cfg.clone();
            c.sweep = None;
            c.scatter.omega = [omega_for_ratio(r * cfg.contrast.epsilon)?, 0.0];
            Ok(c)
        })
        .collect()
}

fn scatter_rows(header_param: Option<&str>, pts: &[(Option<f64>, ScatterBody)]) -> (Vec<String>, Vec<Vec<String>>) {
    let mut header: Vec<String> = header_param.map(|p| vec![p.to_string()]).unwrap_or_default();
    header.extend(
        ["re_omega", "im_omega", "regime", "regime_ratio", "abs_xi", "abs_xi1", "abs_xi2", "abs_xi3", "condition", "warning"]
            .map(String::from),
    );
    let rows = pts
        .iter()
        .map(|(v, s)| {
            let mut row: Vec<String> = header_param.map(|_| vec![num(v.unwrap_or(0.0))]).unwrap_or_default();
            let a = |z: Cplx| num(z.re.hypot(z.im));
            row.extend([
                num(s.omega.re),
                num(s.omega.im),
                format!("{:?}", s.regime),
                num(s.regime_ratio),
                num(s.xi_norm),
                a(s.xi[0]),
                a(s.xi[1]),
                a(s.xi[2]),
                num(s.condition),
                s.warning.clone().unwrap_or_default(),
            ]);
            row
        })
        .collect();
    (header, rows)
}

pub fn scatter(cfg: &RunConfig, preset: bool) -> Result<(), CliError> {
    let pts: Vec<(Option<f64>, RunConfig)> = if preset {
        three_regime_preset(cfg)?.into_iter().map(|c| (None, c)).collect()
    } else {
        points(cfg)?
    };
    let sols = pts
        .par_iter()
        .map(|(v, c)| scatter_solve(c).map(|(s, _)| (*v, ScatterBody::from(&s))))
        .collect::<Result<Vec<_>, _>>()?;
    let single = !preset && cfg.sweep.is_none();
    let fmt = if preset { cfg.format.unwrap_or(Format::Csv) } else { format_of(cfg) };
    match fmt {
        Format::Json if single => write_json(cfg, sols.into_iter().next().expect("one point").1),
        Format::Json => {
            let points = sols
                .into_iter()
                .map(|(v, s)| SweepEntry { value: v.unwrap_or(s.omega.re), result: s })
                .collect();
            let param = if preset { "omega".into() } else { sweep_param(cfg).into() };
            write_json(cfg, SweepBody { param, points })
        }
        Format::Csv => {
            let param = cfg.sweep.as_ref().filter(|_| !preset).map(|s| s.param.as_str());
            let (header, rows) = scatter_rows(param, &sols);
            let header: Vec<&str> = header.iter().map(String::as_str).collect();
            write_csv(cfg, &header, &rows)
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct FarFieldSample {
    pub angle_deg: f64,
    pub u_p: [Cplx; 2],
    pub u_s: [Cplx; 2],
    pub u_p_leading: [Cplx; 2],
    pub u_s_leading: [Cplx; 2],
    pub p_parallel: bool,
    pub s_perpendicular: bool,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct DecayRow {
    pub radius: f64,
    /// `r^{3/2}`-scaled residual per angle.
    pub residual: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct FarFieldBody {
    pub scatter: ScatterBody,
    pub projector_defect: f64,
    pub samples: Vec<FarFieldSample>,
    pub decay: Vec<DecayRow>,
}

/// Tolerance of the projector check columns.
const PROJECTOR_TOL: f64 = 1e-10;

pub fn farfield(cfg: &RunConfig) -> Result<(), CliError> {
    let (sol, b) = scatter_solve(cfg)?;
    let m = cfg.medium()?;
    let angles: Vec<f64> = cfg.farfield.angles_deg.iter().map(|a| a.to_radians()).collect();
    let ff = far_field(&sol, &b, &m, &angles, &cfg.farfield.radii)?;
    let samples: Vec<FarFieldSample> = (0..angles.len())
        .map(|i| {
            let xh = Vector2::new(angles[i].cos(), angles[i].sin()).map(|v| Complex64::new(v, 0.0));
            let p = ff.u_p[i];
            let s = ff.u_s[i];
            let cross = (p[0] * xh[1] - p[1] * xh[0]).norm() / p.norm().max(f64::MIN_POSITIVE);
            let dot = (s[0] * xh[0] + s[1] * xh[1]).norm() / s.norm().max(f64::MIN_POSITIVE);
            FarFieldSample {
                angle_deg: cfg.farfield.angles_deg[i],
                u_p: cvec(&p),
                u_s: cvec(&s),
                u_p_leading: cvec(&ff.u_p_leading[i]),
                u_s_leading: cvec(&ff.u_s_leading[i]),
                p_parallel: cross < PROJECTOR_TOL,
                s_perpendicular: dot < PROJECTOR_TOL,
            }
        })
        .collect();
    let body = FarFieldBody {
        scatter: ScatterBody::from(&sol),
        projector_defect: ff.projector_defect(),
        samples,
        decay: ff
            .radii
            .iter()
            .zip(&ff.decay_residual)
            .map(|(r, v)| DecayRow {
                radius: *r,
                residual: v.clone(),
            })
            .collect(),
    };
    match format_of(cfg) {
        Format::Json => write_json(cfg, body),
        Format::Csv => {
            let header = [
                "angle_deg", "re_up1", "im_up1", "re_up2", "im_up2", "re_us1", "im_us1", "re_us2", "im_us2",
                "p_parallel", "s_perpendicular",
            ];
            let rows: Vec<Vec<String>> = body
                .samples
                .iter()
                .map(|s| {
                    vec![
                        num(s.angle_deg),
                        num(s.u_p[0].re),
                        num(s.u_p[0].im),
                        num(s.u_p[1].re),
                        num(s.u_p[1].im),
                        num(s.u_s[0].re),
                        num(s.u_s[0].im),
                        num(s.u_s[1].re),
                        num(s.u_s[1].im),
                        s.p_parallel.to_string(),
                        s.s_perpendicular.to_string(),
                    ]
                })
                .collect();
            write_csv(cfg, &header, &rows)
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct AlphaRow {
    pub alpha: [f64; 2],
    pub q_alpha: [[Cplx; 2]; 2],
    pub eigenvalues: [f64; 2],
    pub anti_hermitian: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct BandgapBody {
    pub mode: BandgapMode,
    pub scale: f64,
    pub omega_star: f64,
    pub t: Option<Cplx>,
    pub eigenvalues: Option<[f64; 2]>,
    pub warnings: Vec<String>,
    pub samples: Vec<AlphaRow>,
}

impl From<(f64, BandgapResult)> for BandgapBody {
    fn from((scale, r): (f64, BandgapResult)) -> Self {
        Self {
            mode: r.mode,
            scale,
            omega_star: r.omega_star,
            t: r.t.map(Cplx::from),
            eigenvalues: r.eigenvalues,
            warnings: r.warnings,
            samples: r
                .samples
                .iter()
                .map(|s| AlphaRow {
                    alpha: [s.alpha[0], s.alpha[1]],
                    q_alpha: [
                        [s.q_alpha[(0, 0)].into(), s.q_alpha[(0, 1)].into()],
                        [s.q_alpha[(1, 0)].into(), s.q_alpha[(1, 1)].into()],
                    ],
                    eigenvalues: s.eigenvalues,
                    anti_hermitian: s.anti_hermitian,
                })
                .collect(),
        }
    }
}

fn bandgap_run(cfg: &RunConfig, mode: BandgapMode) -> Result<BandgapBody, CliError> {
    let m = cfg.medium()?;
    let c = cfg.contrast()?;
    let b = make_disk(cfg.geometry.radius, cfg.geometry.n_nodes)?;
    let bg = &cfg.bandgap;
    let alphas = match bg.alpha {
        Some(a) => vec![Vector2::new(a[0], a[1])],
        None => alpha_grid(bg.grid_points, bg.alpha_floor),
    };
    let r = bandgap_edge(bg.scale, &b, &m, &c, mode, &alphas)?;
    Ok(BandgapBody::from((bg.scale, r)))
}

pub fn bandgap(cfg: &RunConfig) -> Result<(), CliError> {
    let mode = if cfg.bandgap.dilute { BandgapMode::Dilute } else { BandgapMode::Full };
    if cfg.sweep.is_none() {
        let body = bandgap_run(cfg, mode)?;
        for w in &body.warnings {
            eprintln!("warning: {w}");
        }
        return match format_of(cfg) {
            Format::Json => write_json(cfg, body),
            Format::Csv => {
                let header = ["alpha_x", "alpha_y", "lambda_min", "lambda_max", "anti_hermitian"];
                let rows: Vec<Vec<String>> = body
                    .samples
                    .iter()
                    .map(|s| {
                        vec![
                            num(s.alpha[0]),
                            num(s.alpha[1]),
                            num(s.eigenvalues[0]),
                            num(s.eigenvalues[1]),
                            num(s.anti_hermitian),
                        ]
                    })
                    .collect();
                write_csv(cfg, &header, &rows)
            }
        };
    }
    let pts = points(cfg)?;
    let runs = pts
        .iter()
        .map(|(v, c)| {
            let dilute = bandgap_run(c, BandgapMode::Dilute)?;
            let full = if cfg.bandgap.dilute { None } else { Some(bandgap_run(c, BandgapMode::Full)?) };
            Ok((v.unwrap_or(0.0), c.bandgap.scale, full, dilute))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let param = sweep_param(cfg);
    let own_column = param != "scale";
    let mut header = vec!["scale", "omega_full", "omega_dilute", "relative_gap"];
    if own_column {
        header.insert(0, param);
    }
    let rows: Vec<Vec<String>> = runs
        .iter()
        .map(|(v, s, full, dil)| {
            let (wf, gap) = match full {
                Some(f) => (num(f.omega_star), num((f.omega_star - dil.omega_star).abs() / dil.omega_star)),
                None => (String::new(), String::new()),
            };
            let mut row = vec![num(*s), wf, num(dil.omega_star), gap];
            if own_column {
                row.insert(0, num(*v));
            }
            row
        })
        .collect();
    match format_of(cfg) {
        Format::Csv => write_csv(cfg, &header, &rows),
        Format::Json => {
            let points = runs
                .into_iter()
                .map(|(v, _, full, dil)| SweepEntry {
                    value: v,
                    result: (full, dil),
                })
                .collect();
            write_json(cfg, SweepBody { param: param.into(), points })
        }
    }
}

#[derive(Debug, Serialize)]
pub struct VerifyBody<'a> {
    pub report: &'a SuiteReport,
}

/// Runs the acceptance suite; returns whether every check passed.
pub fn verify(cfg: &RunConfig, opts: &SuiteOptions) -> Result<bool, CliError> {
    let report = run_suite(opts)?;
    for c in &report.checks {
        let v = if c.passed { "PASS" } else { "FAIL" };
        eprintln!("criterion {:>2} {v} [{}] {} ({:.1} s)", c.id, c.anchor, c.title, c.runtime_s);
        for p in c.failed_parts() {
            eprintln!("    failed {}: {:.3e} vs {:.3e}; {}", p.name, p.metric, p.threshold, p.detail);
        }
        if let Some(e) = &c.error {
            eprintln!("    error: {e}");
        }
    }
    write_json(cfg, VerifyBody { report: &report })?;
    Ok(report.passed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_inversion() {
        for t in [1e-6, 1e-4, 1e-2] {
            let w = omega_for_ratio(t).unwrap();
            assert!(((w * w * w.ln().abs()) - t).abs() < 1e-12 * t.max(1e-300) * 1e3);
            assert!(w < (-0.5f64).exp());
        }
        assert!(omega_for_ratio(0.5).is_err());
    }

    #[test]
    fn preset_hits_three_regimes() {
        let cfg = RunConfig::default();
        let pre = three_regime_preset(&cfg).unwrap();
        let sc = ScatterConfig::default();
        let tags: Vec<Regime> = pre
            .iter()
            .map(|c| {
                let w = Complex64::new(c.scatter.omega[0], 0.0);
                lame_resonance::resonance_scattering::classify_regime(
                    lame_resonance::resonance_scattering::regime_ratio(w, c.contrast.epsilon),
                    &sc,
                )
            })
            .collect();
        assert_eq!(tags, vec![Regime::Quasistatic, Regime::Resonant, Regime::Beyond]);
    }
}
