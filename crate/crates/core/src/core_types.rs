//! Material, contrast and frequency parameters.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Isotropic elastic background described by its Lamé parameters and density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElasticMedium {
    pub lambda: f64,
    pub mu: f64,
    pub rho: f64,
}

impl ElasticMedium {
    /// Validated constructor enforcing `mu > 0`, `lambda + mu > 0`, `rho > 0`.
    pub fn new(lambda: f64, mu: f64, rho: f64) -> Result<Self> {
        let m = Self { lambda, mu, rho };
        m.validate()?;
        Ok(m)
    }

    /// Unit medium `lambda = mu = rho = 1`.
    pub fn unit() -> Self {
        Self {
            lambda: 1.0,
            mu: 1.0,
            rho: 1.0,
        }
    }

    /// Checks the strong convexity and positivity conditions.
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda.is_finite() && self.mu.is_finite() && self.rho.is_finite()) {
            return Err(Error::Config("material parameters must be finite".into()));
        }
        if self.mu <= 0.0 {
            return Err(Error::Config(format!(
                "shear modulus mu = {} violates mu > 0",
                self.mu
            )));
        }
        if self.lambda + self.mu <= 0.0 {
            return Err(Error::Config(format!(
                "strong convexity lambda + mu > 0 violated (lambda + mu = {})",
                self.lambda + self.mu
            )));
        }
        if self.rho <= 0.0 {
            return Err(Error::Config(format!(
                "density rho = {} violates rho > 0",
                self.rho
            )));
        }
        Ok(())
    }

    /// P-wave modulus `lambda + 2 mu`.
    pub fn p_modulus(&self) -> f64 {
        self.lambda + 2.0 * self.mu
    }

    /// `tau1 = (1/mu + 1/(lambda + 2 mu)) / 2`.
    pub fn tau1(&self) -> f64 {
        0.5 * (1.0 / self.mu + 1.0 / self.p_modulus())
    }

    /// `tau2 = (1/mu - 1/(lambda + 2 mu)) / 2`.
    pub fn tau2(&self) -> f64 {
        0.5 * (1.0 / self.mu - 1.0 / self.p_modulus())
    }
}

/// Shear and compressional wave speeds `(c_s, c_p)`.
pub fn wave_speeds(medium: &ElasticMedium) -> (f64, f64) {
    (
        (medium.mu / medium.rho).sqrt(),
        (medium.p_modulus() / medium.rho).sqrt(),
    )
}

/// Wave-speed ratio `tau = sqrt(delta / epsilon)`.
pub fn derive_tau(delta: f64, epsilon: f64) -> Result<f64> {
    if !(delta > 0.0 && epsilon > 0.0) {
        return Err(Error::Domain(format!(
            "contrasts must be positive (delta = {delta}, epsilon = {epsilon})"
        )));
    }
    Ok((delta / epsilon).sqrt())
}

/// Stiffness contrast `delta`, density contrast `epsilon` and `tau`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContrastParams {
    pub delta: f64,
    pub epsilon: f64,
    pub tau: f64,
}

impl ContrastParams {
    /// Builds the contrast from `delta` and `epsilon`.
    pub fn from_delta_epsilon(delta: f64, epsilon: f64) -> Result<Self> {
        let tau = derive_tau(delta, epsilon)?;
        Ok(Self {
            delta,
            epsilon,
            tau,
        })
    }

    /// Builds the contrast from `epsilon` and `tau`, with `delta = tau^2 epsilon`.
    pub fn from_epsilon_tau(epsilon: f64, tau: f64) -> Result<Self> {
        if !(epsilon > 0.0 && tau > 0.0) {
            return Err(Error::Domain(format!(
                "epsilon and tau must be positive (epsilon = {epsilon}, tau = {tau})"
            )));
        }
        Ok(Self {
            delta: tau * tau * epsilon,
            epsilon,
            tau,
        })
    }

    /// True when both contrasts lie in `(0, 1]`.
    pub fn in_asymptotic_regime(&self) -> bool {
        self.delta > 0.0 && self.delta <= 1.0 && self.epsilon > 0.0 && self.epsilon <= 1.0
    }
}

/// Frequency together with the derived wavenumbers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveContext {
    pub omega: Complex64,
    /// `sqrt(rho) * omega`.
    pub k_exterior: Complex64,
    /// `sqrt(rho) * tau * omega`.
    pub k_interior: Complex64,
    /// `omega / c_p`.
    pub k_p: Complex64,
}

/// Derives the wavenumbers of a frequency in a given medium.
pub fn wave_context(omega: Complex64, medium: &ElasticMedium, tau: f64) -> WaveContext {
    let sr = medium.rho.sqrt();
    let (_, c_p) = wave_speeds(medium);
    let k_exterior = omega * sr;
    WaveContext {
        omega,
        k_exterior,
        k_interior: k_exterior * tau,
        k_p: omega / c_p,
    }
}
