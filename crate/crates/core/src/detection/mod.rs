//! Detection modes, mode purification and shot-noise-limited homodyne signals.
//!
//! The detection mode of a parameter `pᵢ` is the normalised derivative of the
//! mean field, `wᵢ = (1/Kᵢ) ∂u/∂pᵢ` with `Kᵢ = ‖∂u/∂pᵢ‖`. Homodyning with a
//! local oscillator shaped as `wᵢ` returns `pᵢ` at the coherent-state
//! Cramér-Rao limit `1/(2√N Kᵢ)`, but also picks up every other parameter
//! whose mode overlaps `wᵢ`. Purification removes those overlaps at the cost
//! of a smaller effective `K`.

mod oracle;
mod ranging;
mod report;

pub use oracle::{default_step, numeric_detection_mode};
pub use ranging::{
    contamination_matrix, purified_length_constant_closed_form, purified_ranging_sensitivity,
    ranging_modes, ContaminationMatrix, PurifiedRanging, RangingModes,
};
pub use report::{contamination_report, ParameterSensitivity, SensitivityReport};

use num_complex::Complex64;
use std::fmt;

use crate::dispersion::LinearizedField;
use crate::error::{Error, Result};
use crate::mode_algebra::{gram_schmidt, inner_product, GaussianPulse, SpectralMode};

const NORM_TOLERANCE: f64 = 1e-12;

/// Physical parameter a detection mode is matched to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parameter {
    PhaseDelay,
    GroupDelay,
    GvdDelay,
    Length,
    Density,
    WaterVapor,
}

impl Parameter {
    pub fn symbol(self) -> &'static str {
        match self {
            Parameter::PhaseDelay => "phi",
            Parameter::GroupDelay => "g",
            Parameter::GvdDelay => "gvd",
            Parameter::Length => "L",
            Parameter::Density => "X",
            Parameter::WaterVapor => "Pw",
        }
    }

    /// Unit of the parameter itself.
    pub fn unit(self) -> &'static str {
        match self {
            Parameter::PhaseDelay | Parameter::GroupDelay | Parameter::GvdDelay => "s",
            Parameter::Length => "m",
            Parameter::Density => "1",
            Parameter::WaterVapor => "Pa",
        }
    }
}

impl fmt::Display for Parameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModeLabel {
    Detection(Parameter),
    Purified {
        target: Parameter,
        against: Vec<Parameter>,
    },
}

impl ModeLabel {
    pub fn parameter(&self) -> Parameter {
        match self {
            ModeLabel::Detection(p) => *p,
            ModeLabel::Purified { target, .. } => *target,
        }
    }
}

impl fmt::Display for ModeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModeLabel::Detection(p) => write!(f, "w_{p}"),
            ModeLabel::Purified { target, against } => {
                let names: Vec<&str> = against.iter().map(|p| p.symbol()).collect();
                write!(f, "w_{target}^p[{}]", names.join(","))
            }
        }
    }
}

/// A unit-norm spectral mode with its normalisation constant `K`.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectionMode {
    label: ModeLabel,
    mode: SpectralMode,
    k_const: f64,
}

impl DetectionMode {
    pub fn new(label: ModeLabel, mode: SpectralMode, k_const: f64) -> Result<Self> {
        if !k_const.is_finite() || k_const <= 0.0 {
            return Err(Error::invalid("k_const", format!("{k_const} must be positive")));
        }
        if (mode.norm() - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::invalid(
                "mode",
                format!("norm {} is not 1 within {NORM_TOLERANCE}", mode.norm()),
            ));
        }
        Ok(DetectionMode {
            label,
            mode,
            k_const,
        })
    }

    /// Splits `∂u/∂p` into its norm `K` and the unit mode `w`.
    pub fn from_derivative(parameter: Parameter, derivative: SpectralMode) -> Result<Self> {
        let k_const = derivative.norm();
        let mode = derivative.normalized()?;
        DetectionMode::new(ModeLabel::Detection(parameter), mode, k_const)
    }

    pub fn label(&self) -> &ModeLabel {
        &self.label
    }

    pub fn mode(&self) -> &SpectralMode {
        &self.mode
    }

    pub fn k_const(&self) -> f64 {
        self.k_const
    }

    pub fn pulse(&self) -> &GaussianPulse {
        self.mode.pulse()
    }

    /// Real overlap `Re⟨self, other⟩`.
    pub fn overlap(&self, other: &DetectionMode) -> Result<f64> {
        Ok(inner_product(&self.mode, &other.mode)?.re)
    }
}

/// Detection modes of the phase, group and GVD delays.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeModes {
    pub phi: DetectionMode,
    pub group: DetectionMode,
    pub gvd: DetectionMode,
}

/// `w_φ = v₀`, `w_g = v₁`, `w_GVD = (v₀ + √2 v₂)/√3`, with `K_φ = ω₀`,
/// `K_g = Δω` and `K_GVD = √3 Δω²/ω₀`.
pub fn time_detection_modes(pulse: GaussianPulse) -> TimeModes {
    let w0 = pulse.omega0();
    let dw = pulse.delta_omega();
    let build = |parameter, coefficients: &[f64]| {
        let derivative = SpectralMode::from_real(pulse, coefficients).expect("low order");
        DetectionMode::from_derivative(parameter, derivative).expect("non-zero derivative")
    };
    let curvature = dw * dw / w0;
    TimeModes {
        phi: build(Parameter::PhaseDelay, &[w0]),
        group: build(Parameter::GroupDelay, &[0.0, dw]),
        gvd: build(
            Parameter::GvdDelay,
            &[curvature, 0.0, std::f64::consts::SQRT_2 * curvature],
        ),
    }
}

/// Re-orthogonalises `target` against the span of `against`.
///
/// The result is unit norm, orthogonal to every interfering mode, and carries
/// `K^p = K·⟨w^p, w⟩ ≤ K`. An empty `against` returns `target` unchanged.
pub fn purify(target: &DetectionMode, against: &[&DetectionMode]) -> Result<DetectionMode> {
    if against.is_empty() {
        return Ok(target.clone());
    }
    let interferers: Vec<SpectralMode> = against.iter().map(|m| m.mode.clone()).collect();
    let basis = gram_schmidt(&interferers)?;
    let mut residual = crate::mode_algebra::remove_projections(&target.mode, &basis)?;
    if residual.norm_sqr() < crate::mode_algebra::INDEPENDENCE_TOLERANCE {
        return Err(Error::NotSeparable);
    }
    residual = crate::mode_algebra::remove_projections(&residual, &basis)?;
    let mode = residual.normalized()?;
    let overlap = inner_product(&mode, &target.mode)?.re;
    DetectionMode::new(
        ModeLabel::Purified {
            target: target.label.parameter(),
            against: against.iter().map(|m| m.label.parameter()).collect(),
        },
        mode,
        target.k_const * overlap,
    )
}

/// Parameter estimate from a balanced homodyne detection with LO `lo`:
/// `(1/K)·Re⟨u(p), w⟩` minus its unperturbed value.
pub fn homodyne_signal(field: &LinearizedField, lo: &DetectionMode) -> Result<f64> {
    let with = inner_product(&field.total(), &lo.mode)?.re;
    let without = inner_product(field.unperturbed(), &lo.mode)?.re;
    Ok((with - without) / lo.k_const)
}

/// Smallest detectable parameter change, `1/(2√N K)`.
pub fn min_detectable(k_const: f64, photons: f64) -> Result<f64> {
    if !photons.is_finite() || photons < 1.0 {
        return Err(Error::invalid(
            "photon_number",
            format!("{photons} must be at least 1"),
        ));
    }
    if !k_const.is_finite() || k_const <= 0.0 {
        return Err(Error::invalid("k_const", format!("{k_const} must be positive")));
    }
    Ok(1.0 / (2.0 * photons.sqrt() * k_const))
}

pub(crate) fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}
