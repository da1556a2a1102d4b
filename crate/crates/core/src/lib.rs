//! Design and simulation toolkit for dispersion-immune distance measurement
//! with optical frequency combs.
//!
//! The crate is organised bottom-up:
//!
//! * [`air`]: refractive index of air and its dispersion scalars
//! * [`mode_algebra`]: Hermite-Gauss spectral modes, inner products, Gram-Schmidt
//! * [`dispersion`]: spectral-phase propagation and its second-order expansion
//! * [`detection`]: detection modes, purification, homodyne signals and shot-noise limits
//! * [`multicolor`]: two- and three-wavelength interferometry baselines
//! * [`simulator`]: seeded Monte Carlo of the shaped-LO homodyne measurement

pub mod air;
pub mod detection;
pub mod dispersion;
pub mod error;
pub mod mode_algebra;
pub mod multicolor;
pub mod simulator;

pub use error::{Error, Result};

/// Speed of light in vacuum, m/s (exact).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
