//! Command-line front end: resonance roots, scattering, far fields, bandgap
//! edges and the verification suite.
//!
//! Exit codes: 0 success, 1 check failure, 2 configuration error, 3 solver
//! error.

mod commands;
mod config;
mod output;
mod sweep;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lame_resonance::acceptance::{ClosedFormConstant, Perturbation, SuiteOptions};
use serde::Serialize;
use thiserror::Error;

use config::{Format, RunConfig};
use sweep::Sweep;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("solver error: {0}")]
    Solver(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<lame_resonance::Error> for CliError {
    fn from(e: lame_resonance::Error) -> Self {
        use lame_resonance::Error as E;
        match e {
            E::Config(m) | E::Domain(m) => CliError::Config(m),
            _ => CliError::Solver(e.to_string()),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Solver(_) | CliError::Io(_) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "lame-resonance", version, about = "Subwavelength resonances of a high-contrast elastic disk")]
struct Cli {
    #[command(flatten)]
    shared: Shared,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Shared {
    /// JSON configuration file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    lambda: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    mu: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    rho: Option<f64>,
    #[arg(long, global = true)]
    radius: Option<f64>,
    #[arg(long, global = true)]
    nodes: Option<usize>,
    #[arg(long, global = true)]
    epsilon: Option<f64>,
    #[arg(long, global = true, conflicts_with = "tau")]
    delta: Option<f64>,
    #[arg(long, global = true)]
    tau: Option<f64>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// `param=start:stop:count[:log]`.
    #[arg(long, global = true)]
    sweep: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Leading-order resonance roots.
    Resonances {
        /// Cross-check each root against the singular-value dip of the full system.
        #[arg(long)]
        svd_check: bool,
    },
    /// Plane-wave scattering and the interior amplification.
    Scatter {
        #[command(flatten)]
        wave: Wave,
        /// One frequency in each amplification regime.
        #[arg(long, value_parser = ["three-regime"])]
        preset: Option<String>,
    },
    /// Far-field patterns and the decay table.
    Farfield {
        #[command(flatten)]
        wave: Wave,
        /// Observation angles in degrees.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        angles: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',')]
        radii: Option<Vec<f64>>,
    },
    /// Bandgap edge of the periodic array.
    Bandgap {
        #[arg(long)]
        scale: Option<f64>,
        /// Single quasi-momentum `ax,ay` instead of the grid.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        alpha: Option<Vec<f64>>,
        /// Use the dilute closed form.
        #[arg(long)]
        dilute: bool,
    },
    /// Runs the acceptance suite.
    Verify {
        /// Comma-separated criterion ids.
        #[arg(long, value_delimiter = ',')]
        only: Option<Vec<u8>>,
        /// `constant=relative` with constant one of neumann-poincare,
        /// translation-eigenvalue, q-translation.
        #[arg(long)]
        perturb: Option<String>,
    },
}

#[derive(Debug, Args)]
struct Wave {
    /// `re,im`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    omega: Option<Vec<f64>>,
    /// Incidence direction in degrees.
    #[arg(long, allow_hyphen_values = true)]
    direction: Option<f64>,
}

fn apply_shared(cfg: &mut RunConfig, s: &Shared) -> Result<(), CliError> {
    let pairs = [
        ("lambda", s.lambda),
        ("mu", s.mu),
        ("rho", s.rho),
        ("radius", s.radius),
        ("epsilon", s.epsilon),
        ("delta", s.delta),
        ("tau", s.tau),
    ];
    for (name, v) in pairs {
        if let Some(v) = v {
            cfg.set(name, v)?;
        }
    }
    if let Some(n) = s.nodes {
        cfg.geometry.n_nodes = n;
    }
    if let Some(o) = &s.out {
        cfg.out = Some(o.clone());
    }
    if let Some(f) = s.format {
        cfg.format = Some(f);
    }
    if let Some(sw) = &s.sweep {
        cfg.sweep = Some(sw.parse::<Sweep>()?);
    }
    Ok(())
}

fn apply_wave(cfg: &mut RunConfig, w: &Wave) -> Result<(), CliError> {
    if let Some(o) = &w.omega {
        cfg.scatter.omega = match o.as_slice() {
            [re] => [*re, 0.0],
            [re, im] => [*re, *im],
            _ => return Err(CliError::Config("--omega takes re or re,im".into())),
        };
    }
    if let Some(d) = w.direction {
        cfg.scatter.direction_deg = d;
    }
    Ok(())
}

fn parse_perturbation(s: &str) -> Result<Perturbation, CliError> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| CliError::Config(format!("perturbation '{s}' must read constant=relative")))?;
    let constant = ClosedFormConstant::parse(name)
        .ok_or_else(|| CliError::Config(format!("unknown closed-form constant '{name}'")))?;
    let relative = value
        .parse()
        .map_err(|_| CliError::Config(format!("perturbation size '{value}' is not a number")))?;
    Ok(Perturbation { constant, relative })
}

#[derive(Serialize)]
struct Diagnostic<'a> {
    kind: &'a str,
    message: String,
}

enum Outcome {
    Done,
    ChecksFailed,
}

fn run(cli: &Cli) -> Result<Outcome, (CliError, Option<RunConfig>)> {
    let mut cfg = match &cli.shared.config {
        Some(p) => RunConfig::load(p).map_err(|e| (e, None))?,
        None => RunConfig::default(),
    };
    apply_shared(&mut cfg, &cli.shared).map_err(|e| (e, None))?;
    let mut preset = false;
    let mut suite = SuiteOptions::default();
    match &cli.command {
        Command::Resonances { svd_check } => cfg.resonances.svd_check |= *svd_check,
        Command::Scatter { wave, preset: p } => {
            apply_wave(&mut cfg, wave).map_err(|e| (e, None))?;
            preset = p.is_some();
        }
        Command::Farfield { wave, angles, radii } => {
            apply_wave(&mut cfg, wave).map_err(|e| (e, None))?;
            if let Some(a) = angles {
                cfg.farfield.angles_deg = a.clone();
            }
            if let Some(r) = radii {
                cfg.farfield.radii = r.clone();
            }
        }
        Command::Bandgap { scale, alpha, dilute } => {
            if let Some(s) = scale {
                cfg.bandgap.scale = *s;
            }
            if let Some(a) = alpha {
                let [ax, ay] = a.as_slice() else {
                    return Err((CliError::Config("--alpha takes ax,ay".into()), None));
                };
                cfg.bandgap.alpha = Some([*ax, *ay]);
            }
            cfg.bandgap.dilute |= *dilute;
        }
        Command::Verify { only, perturb } => {
            suite.only = only.clone();
            if let Some(p) = perturb {
                suite.perturbation = Some(parse_perturbation(p).map_err(|e| (e, None))?);
            }
        }
    }
    cfg.validate().map_err(|e| (e, Some(cfg.clone())))?;
    let result = match &cli.command {
        Command::Resonances { .. } => commands::resonances(&cfg),
        Command::Scatter { .. } => commands::scatter(&cfg, preset),
        Command::Farfield { .. } => commands::farfield(&cfg),
        Command::Bandgap { .. } => commands::bandgap(&cfg),
        Command::Verify { .. } => {
            return match commands::verify(&cfg, &suite) {
                Ok(true) => Ok(Outcome::Done),
                Ok(false) => Ok(Outcome::ChecksFailed),
                Err(e) => Err((e, Some(cfg))),
            }
        }
    };
    result.map(|_| Outcome::Done).map_err(|e| (e, Some(cfg)))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::ChecksFailed) => ExitCode::from(1),
        Err((e, cfg)) => {
            eprintln!("error: {e}");
            if let (CliError::Solver(msg), Some(cfg)) = (&e, cfg) {
                let diag = Diagnostic {
                    kind: "solver",
                    message: msg.clone(),
                };
                if let Err(w) = output::write_json(&cfg, diag) {
                    eprintln!("error: {w}");
                }
            }
            ExitCode::from(e.exit_code())
        }
    }
}
