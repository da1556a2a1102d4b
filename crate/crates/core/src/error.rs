use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An input violates a documented domain constraint.
    #[error("invalid {field}: {reason}")]
    InvalidInput { field: &'static str, reason: String },

    /// A wavenumber sits too close to one of the dispersion resonances.
    #[error("wavenumber sigma = {sigma} um^-1 is within 1e-6 of a resonance pole (sigma^2 = {pole})")]
    PoleProximity { sigma: f64, pole: f64 },

    #[error("Hermite-Gauss order {order} exceeds the configured maximum {max}")]
    OrderOverflow { order: usize, max: usize },

    #[error("modes are built on different pulses")]
    PulseMismatch,

    #[error("sampled modes use different grids")]
    GridMismatch,

    #[error("sampling grid covers only +/-{covered:.2} spectral widths with {points} points (need +/-{required} and >= {min_points})")]
    InsufficientCoverage {
        covered: f64,
        required: f64,
        points: usize,
        min_points: usize,
    },

    /// Gram-Schmidt met a vector (nearly) inside the span of its predecessors.
    #[error("mode {index} is linearly dependent on the preceding modes (squared residual {residual:e})")]
    LinearDependence { index: usize, residual: f64 },

    #[error("parameter not separable: target mode lies in the span of the interfering modes")]
    NotSeparable,

    /// First-order expansion would be used outside its range of validity.
    #[error("linearity guard violated: perturbation phase {phase:.3e} rad exceeds {limit} rad")]
    LinearityGuard { phase: f64, limit: f64 },

    #[error("finite-difference step too small: phase excursion {phase:e} rad is below the noise floor")]
    StepTooSmall { phase: f64 },

    #[error("wavelengths {0} m and {1} m give identical dispersion; combination is degenerate")]
    DegenerateWavelengths(f64, f64),

    #[error("three-wavelength system is singular (colinear dispersion)")]
    ColinearDispersion,

    #[error("regression is not applicable: {0}")]
    RegressionNotApplicable(String),
}

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidInput {
            field,
            reason: reason.into(),
        }
    }

    /// True for errors caused by bad user input rather than numerical failure.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidInput { .. }
                | Error::OrderOverflow { .. }
                | Error::DegenerateWavelengths(..)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
