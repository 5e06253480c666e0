//! Boundary-integral analysis of subwavelength resonances for a stiff, dense
//! elastic disk embedded in a soft isotropic background in two dimensions.
//!
//! The crate is organised bottom-up:
//!
//! - [`core_types`]: material, contrast and frequency parameters.
//! - [`kernels`]: Hankel functions, the Kupradze matrix, its static limit,
//!   low-frequency expansion terms and the far-field kernel.
//! - [`boundary`]: circle quadrature, densities and the rigid-motion basis.
//! - [`layer_ops`]: Nyström matrices of single-layer and Neumann–Poincaré
//!   operators with spectrally accurate singular quadrature.
//! - [`disk_spectral`]: closed-form disk quantities.
//! - [`resonance_scattering`]: the transmission system, resonance roots,
//!   forced scattering and far-field patterns.
//! - [`phononic`]: quasi-periodic static Green's function and bandgap edges.
//! - [`acceptance`]: the verification suite shared by tests and the CLI.

pub mod acceptance;
pub mod boundary;
pub mod core_types;
pub mod disk_spectral;
pub mod error;
pub mod kernels;
pub mod layer_ops;
pub mod linalg;
pub mod phononic;
pub mod resonance_scattering;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
