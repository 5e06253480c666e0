//! Run configuration: a JSON file overlaid with command-line flags.

use std::path::{Path, PathBuf};

use lame_resonance::core_types::{ContrastParams, ElasticMedium};
use lame_resonance::phononic::{DEFAULT_ALPHA_FLOOR, MAX_SCALE};
use serde::{Deserialize, Serialize};

use crate::sweep::Sweep;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Material {
    pub lambda: f64,
    pub mu: f64,
    pub rho: f64,
}

impl Default for Material {
    fn default() -> Self {
        Self {
            lambda: 1.0,
            mu: 1.0,
            rho: 1.0,
        }
    }
}

/// `epsilon` together with exactly one of `delta` and `tau`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Contrast {
    pub epsilon: f64,
    pub delta: Option<f64>,
    pub tau: Option<f64>,
}

impl Default for Contrast {
    fn default() -> Self {
        Self {
            epsilon: 1e-4,
            delta: None,
            tau: Some(1.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Geometry {
    pub radius: f64,
    pub n_nodes: usize,
}

impl Default for Geometry {
    fn default() -> Self {
        Self {
            radius: 1.0,
            n_nodes: 256,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ResonanceBlock {
    /// Locate the singular-value dip of the full system next to each root.
    pub svd_check: bool,
    /// Node count of the dip search.
    pub svd_nodes: usize,
}

impl Default for ResonanceBlock {
    fn default() -> Self {
        Self {
            svd_check: false,
            svd_nodes: 64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScatterBlock {
    /// `[re, im]`.
    pub omega: [f64; 2],
    /// Incidence direction in degrees.
    pub direction_deg: f64,
    pub condition_limit: f64,
}

impl Default for ScatterBlock {
    fn default() -> Self {
        Self {
            omega: [0.01, 0.0],
            direction_deg: 0.0,
            condition_limit: 1e14,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FarFieldBlock {
    /// Observation angles in degrees.
    pub angles_deg: Vec<f64>,
    /// Radii of the decay table.
    pub radii: Vec<f64>,
}

impl Default for FarFieldBlock {
    fn default() -> Self {
        Self {
            angles_deg: (0..12).map(|q| 30.0 * q as f64).collect(),
            radii: vec![20.0, 40.0, 80.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BandgapBlock {
    pub scale: f64,
    /// Single quasi-momentum instead of the grid.
    pub alpha: Option<[f64; 2]>,
    pub grid_points: usize,
    pub alpha_floor: f64,
    pub dilute: bool,
}

impl Default for BandgapBlock {
    fn default() -> Self {
        Self {
            scale: 0.1,
            alpha: None,
            grid_points: 16,
            alpha_floor: DEFAULT_ALPHA_FLOOR,
            dilute: false,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub material: Material,
    pub contrast: Contrast,
    pub geometry: Geometry,
    pub resonances: ResonanceBlock,
    pub scatter: ScatterBlock,
    pub farfield: FarFieldBlock,
    pub bandgap: BandgapBlock,
    pub sweep: Option<Sweep>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("invalid config {}: {e}", path.display())))
    }

    pub fn medium(&self) -> Result<ElasticMedium, CliError> {
        let m = &self.material;
        Ok(ElasticMedium::new(m.lambda, m.mu, m.rho)?)
    }

    pub fn contrast(&self) -> Result<ContrastParams, CliError> {
        let c = &self.contrast;
        match (c.delta, c.tau) {
            (Some(d), None) => Ok(ContrastParams::from_delta_epsilon(d, c.epsilon)?),
            (None, Some(t)) => Ok(ContrastParams::from_epsilon_tau(c.epsilon, t)?),
            _ => Err(CliError::Config("exactly one of delta and tau must be given with epsilon".into())),
        }
    }

    /// Checks every physical invariant without running anything.
    pub fn validate(&self) -> Result<(), CliError> {
        self.medium()?;
        self.contrast()?;
        let g = &self.geometry;
        if !(g.radius.is_finite() && g.radius > 0.0) {
            return Err(CliError::Config(format!("radius {} must be positive", g.radius)));
        }
        if g.n_nodes < 8 || !g.n_nodes.is_multiple_of(2) {
            return Err(CliError::Config(format!("n_nodes {} must be even and at least 8", g.n_nodes)));
        }
        if self.resonances.svd_nodes < 8 || !self.resonances.svd_nodes.is_multiple_of(2) {
            return Err(CliError::Config("svd_nodes must be even and at least 8".into()));
        }
        let w = self.scatter.omega;
        if !(w[0].is_finite() && w[1].is_finite()) || (w[0] == 0.0 && w[1] == 0.0) {
            return Err(CliError::Config("omega must be finite and nonzero".into()));
        }
        if self.farfield.radii.iter().any(|r| r.is_nan() || *r <= 5.0 * g.radius) {
            return Err(CliError::Config(format!("far-field radii must exceed 5R = {}", 5.0 * g.radius)));
        }
        let b = &self.bandgap;
        if !(b.scale > 0.0 && b.scale <= MAX_SCALE) {
            return Err(CliError::Config(format!("scale {} must lie in (0, {MAX_SCALE}]", b.scale)));
        }
        if b.grid_points == 0 {
            return Err(CliError::Config("grid_points must be positive".into()));
        }
        Ok(())
    }

    /// Sets a numeric parameter by name; used by flags and sweeps.
    pub fn set(&mut self, param: &str, value: f64) -> Result<(), CliError> {
        match param {
            "lambda" => self.material.lambda = value,
            "mu" => self.material.mu = value,
            "rho" => self.material.rho = value,
            "epsilon" => self.contrast.epsilon = value,
            "delta" => {
                self.contrast.delta = Some(value);
                self.contrast.tau = None;
            }
            "tau" => {
                self.contrast.tau = Some(value);
                self.contrast.delta = None;
            }
            "radius" => self.geometry.radius = value,
            "omega" => self.scatter.omega[0] = value,
            "omega_im" => self.scatter.omega[1] = value,
            "direction" => self.scatter.direction_deg = value,
            "scale" => self.bandgap.scale = value,
            _ => return Err(CliError::Config(format!("unknown sweep parameter {param}"))),
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        RunConfig::default().validate().unwrap();
    }

    #[test]
    fn both_delta_and_tau_rejected() {
        let mut c = RunConfig::default();
        c.contrast.delta = Some(1e-4);
        assert!(matches!(c.validate(), Err(CliError::Config(_))));
    }

    #[test]
    fn set_switches_contrast_form() {
        let mut c = RunConfig::default();
        c.set("delta", 2e-4).unwrap();
        assert_eq!(c.contrast.tau, None);
        assert!((c.contrast().unwrap().tau - 2f64.sqrt()).abs() < 1e-15);
        assert!(c.set("nope", 1.0).is_err());
    }

    #[test]
    fn unknown_fields_rejected() {
        assert!(serde_json::from_str::<RunConfig>(r#"{"material": {"nu": 0.3}}"#).is_err());
        let c: RunConfig = serde_json::from_str(r#"{"material": {"lambda": 2.0}}"#).unwrap();
        assert_eq!(c.material.mu, 1.0);
    }
}
