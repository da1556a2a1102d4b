use num_complex::Complex64;
use std::f64::consts::SQRT_2;

use super::{min_detectable, purify, real, DetectionMode, Parameter};
use crate::air::{self, DispersionScalars, Wavenumber};
use crate::dispersion::RangingPath;
use crate::error::{Error, Result};
use crate::mode_algebra::{inner_product, GaussianPulse, SpectralMode, INDEPENDENCE_TOLERANCE};
use crate::SPEED_OF_LIGHT;

/// Detection modes of length, density factor and water-vapour pressure.
#[derive(Debug, Clone, PartialEq)]
pub struct RangingModes {
    pub length: DetectionMode,
    pub density: DetectionMode,
    pub water_vapor: DetectionMode,
    pub scalars: DispersionScalars,
}

impl RangingModes {
    pub fn get(&self, parameter: Parameter) -> Option<&DetectionMode> {
        match parameter {
            Parameter::Length => Some(&self.length),
            Parameter::Density => Some(&self.density),
            Parameter::WaterVapor => Some(&self.water_vapor),
            _ => None,
        }
    }

    pub fn as_array(&self) -> [&DetectionMode; 3] {
        [&self.length, &self.density, &self.water_vapor]
    }
}

/// Second-order derivative vector on `(v₀, v₁, v₂)` of a parameter entering
/// the phase as `scale·f(ω)·ω`, with `f` expanded through `s1 = ω₀f'/f` and
/// `s2 = ω₀²f''/(2f)`.
fn dispersive_derivative(pulse: &GaussianPulse, scale: f64, s1: f64, s2: f64) -> Result<SpectralMode> {
    let w0 = pulse.omega0();
    let dw = pulse.delta_omega();
    let curvature = dw * dw / w0;
    let s = s1 + s2;
    SpectralMode::from_real(
        *pulse,
        &[
            scale * (w0 + curvature * s),
            scale * dw * (1.0 + s1),
            scale * SQRT_2 * curvature * s,
        ],
    )
}

/// `w_L ∝ ω₀v₀ + Δω v₁` with `K_L = √(ω₀² + Δω²)/c` (1/m), and the
/// dispersive modes of X (`K_X` dimensionless) and `P_w` (`K_Pw` in 1/Pa).
///
/// `w_L` ignores the dispersion of the path itself; its mismatch with the
/// exact derivative is of order `n - 1`.
pub fn ranging_modes(pulse: GaussianPulse, path: &RangingPath) -> Result<RangingModes> {
    let w0 = pulse.omega0();
    let sigma = Wavenumber::from_angular_frequency(w0)?;
    let k0 = air::k_dispersion(sigma)?;
    let g0 = air::water_term(sigma);
    let scalars = air::dispersion_scalars(w0)?;
    let transit = path.length() / SPEED_OF_LIGHT;

    let length = SpectralMode::from_real(
        pulse,
        &[w0 / SPEED_OF_LIGHT, pulse.delta_omega() / SPEED_OF_LIGHT],
    )?;
    let density = dispersive_derivative(&pulse, k0 * transit, scalars.delta1, scalars.delta2)?;
    let water = dispersive_derivative(&pulse, -g0 * transit, scalars.eta1, scalars.eta2)?;

    Ok(RangingModes {
        length: DetectionMode::from_derivative(Parameter::Length, length)?,
        density: DetectionMode::from_derivative(Parameter::Density, density)?,
        water_vapor: DetectionMode::from_derivative(Parameter::WaterVapor, water)?,
        scalars,
    })
}

/// Cross-signal matrix `M[i][j] = (K_j/K_i)·Re⟨w_i, w_j⟩`: row `i` is the
/// signal of LO `w_i` per unit of parameter `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct ContaminationMatrix {
    parameters: Vec<Parameter>,
    entries: Vec<Vec<f64>>,
}

impl ContaminationMatrix {
    pub fn parameters(&self) -> &[Parameter] {
        &self.parameters
    }

    pub fn entries(&self) -> &[Vec<f64>] {
        &self.entries
    }

    pub fn entry(&self, lo: Parameter, source: Parameter) -> Option<f64> {
        let i = self.parameters.iter().position(|&p| p == lo)?;
        let j = self.parameters.iter().position(|&p| p == source)?;
        Some(self.entries[i][j])
    }

    /// Signals of every LO for the perturbation vector `p` (ordered as `parameters`).
    pub fn signals(&self, p: &[f64]) -> Result<Vec<f64>> {
        if p.len() != self.parameters.len() {
            return Err(Error::invalid(
                "perturbation",
                format!("expected {} entries, got {}", self.parameters.len(), p.len()),
            ));
        }
        Ok(self
            .entries
            .iter()
            .map(|row| row.iter().zip(p).map(|(m, x)| m * x).sum())
            .collect())
    }
}

pub fn contamination_matrix(modes: &[&DetectionMode]) -> Result<ContaminationMatrix> {
    let mut entries = vec![vec![0.0; modes.len()]; modes.len()];
    for (i, wi) in modes.iter().enumerate() {
        for (j, wj) in modes.iter().enumerate() {
            entries[i][j] = if i == j {
                1.0
            } else {
                wj.k_const() / wi.k_const() * wi.overlap(wj)?
            };
        }
    }
    Ok(ContaminationMatrix {
        parameters: modes.iter().map(|m| m.label().parameter()).collect(),
        entries,
    })
}

/// `‖x - y‖²/2`, equal to `1 - Re⟨x, y⟩` for unit vectors but free of cancellation.
fn chord_gap(x: &SpectralMode, y: &SpectralMode) -> Result<f64> {
    Ok(x.add_scaled(real(-1.0), y)?.norm_sqr() / 2.0)
}

fn aligned(reference: &DetectionMode, mode: &DetectionMode) -> Result<SpectralMode> {
    let sign = inner_product(reference.mode(), mode.mode())?.re.signum();
    Ok(mode.mode().scaled(Complex64::new(sign, 0.0)))
}

/// `K_L^p = K_L √(1 - (a² + b² - 2abc)/(1 - c²))` with `a = ⟨w_L, w_Pw⟩`,
/// `b = ⟨w_L, w_X⟩`, `c = ⟨w_X, w_Pw⟩`.
///
/// The three modes are nearly parallel, so the expression is evaluated in
/// terms of chord gaps `ε = 1 - overlap` after aligning signs; the numerator
/// becomes `2Σε_iε_j - Σε_i² - 2ε_aε_bε_c` and the denominator `ε_c(2 - ε_c)`.
pub fn purified_length_constant_closed_form(modes: &RangingModes) -> Result<f64> {
    let l = modes.length.mode();
    let x = aligned(&modes.length, &modes.density)?;
    let pw = aligned(&modes.length, &modes.water_vapor)?;
    let ea = chord_gap(l, &pw)?;
    let eb = chord_gap(l, &x)?;
    let ec = chord_gap(&x, &pw)?;
    let denominator = ec * (2.0 - ec);
    if denominator < INDEPENDENCE_TOLERANCE {
        return Err(Error::NotSeparable);
    }
    let numerator =
        2.0 * (ea * eb + eb * ec + ec * ea) - (ea * ea + eb * eb + ec * ec) - 2.0 * ea * eb * ec;
    Ok(modes.length.k_const() * (numerator.max(0.0) / denominator).sqrt())
}

/// Shot-noise-limited length resolution with raw, fully purified and
/// X-only purified length modes.
#[derive(Debug, Clone, PartialEq)]
pub struct PurifiedRanging {
    pub photons: f64,
    pub full: DetectionMode,
    pub x_only: DetectionMode,
    /// `K_L^p` by the closed form, for comparison with `full.k_const()`.
    pub k_full_closed_form: f64,
    pub delta_l_raw: f64,
    pub delta_l_full: f64,
    pub delta_l_x_only: f64,
}

pub fn purified_ranging_sensitivity(
    modes: &RangingModes,
    photons: f64,
) -> Result<PurifiedRanging> {
    let full = purify(&modes.length, &[&modes.density, &modes.water_vapor])?;
    let x_only = purify(&modes.length, &[&modes.density])?;
    let k_full_closed_form = purified_length_constant_closed_form(modes)?;
    Ok(PurifiedRanging {
        photons,
        delta_l_raw: min_detectable(modes.length.k_const(), photons)?,
        delta_l_full: min_detectable(full.k_const(), photons)?,
        delta_l_x_only: min_detectable(x_only.k_const(), photons)?,
        full,
        x_only,
        k_full_closed_form,
    })
}
