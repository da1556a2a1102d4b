//! Propagation through air as a pure spectral phase, and its expansion to
//! second order around the carrier into phase, group and GVD delays.
//!
//! Perturbations are offsets from a reference path (reference air state and
//! reference length). The exact propagator is always available next to the
//! first-order field so truncation error can be measured.

use num_complex::Complex64;

use crate::air::{self, AirState, Wavenumber};
use crate::detection::{ranging_modes, time_detection_modes};
use crate::error::{Error, Result};
use crate::mode_algebra::{gaussian_mode, GaussianPulse, SampledMode, SpectralMode};
use crate::SPEED_OF_LIGHT;

/// Largest first-order spectral phase, at `ω₀ ± 2Δω`, for which a perturbation
/// is treated as linear.
pub const LINEARITY_LIMIT_RAD: f64 = 0.1;

/// Phase delay, group delay and GVD delay of a path, in seconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DelayTriple {
    pub t_phi: f64,
    pub t_g: f64,
    pub t_gvd: f64,
}

impl DelayTriple {
    pub fn scaled(&self, factor: f64) -> DelayTriple {
        DelayTriple {
            t_phi: self.t_phi * factor,
            t_g: self.t_g * factor,
            t_gvd: self.t_gvd * factor,
        }
    }

    /// `ω₀ t_φ + (ω - ω₀) t_g + (ω - ω₀)²/ω₀ · t_GVD`
    pub fn expanded_phase(&self, omega0: f64, omega: f64) -> f64 {
        let d = omega - omega0;
        omega0 * self.t_phi + d * self.t_g + d * d / omega0 * self.t_gvd
    }
}

/// A reference optical path: air state and geometric length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RangingPath {
    state: AirState,
    length_m: f64,
}

impl RangingPath {
    pub fn new(state: AirState, length_m: f64) -> Result<Self> {
        if !length_m.is_finite() || length_m <= 0.0 {
            return Err(Error::invalid(
                "length",
                format!("{length_m} m must be positive"),
            ));
        }
        Ok(RangingPath { state, length_m })
    }

    pub fn state(&self) -> &AirState {
        &self.state
    }

    pub fn length(&self) -> f64 {
        self.length_m
    }

    pub fn with_length(&self, length_m: f64) -> Result<Self> {
        RangingPath::new(self.state, length_m)
    }
}

pub fn expansion_times(state: &AirState, length_m: f64, omega0: f64) -> Result<DelayTriple> {
    if !length_m.is_finite() || length_m <= 0.0 {
        return Err(Error::invalid(
            "length",
            format!("{length_m} m must be positive"),
        ));
    }
    let sigma = Wavenumber::from_angular_frequency(omega0)?;
    let r = air::refractivity_derivatives(sigma, state)?.per_omega();
    let transit = length_m / SPEED_OF_LIGHT;
    Ok(DelayTriple {
        t_phi: (1.0 + r.value) * transit,
        t_g: (1.0 + r.value + omega0 * r.first) * transit,
        t_gvd: omega0 * (r.first + 0.5 * omega0 * r.second) * transit,
    })
}

/// Exact spectral phase `n_φ(ω)·ω·L/c`.
pub fn spectral_phase(omega: f64, state: &AirState, length_m: f64) -> Result<f64> {
    let sigma = Wavenumber::from_angular_frequency(omega).map_err(grid_error)?;
    Ok(air::phase_index(sigma, state)? * omega * length_m / SPEED_OF_LIGHT)
}

fn grid_error(e: Error) -> Error {
    match e {
        Error::InvalidInput { reason, .. } => Error::invalid("grid", reason),
        other => other,
    }
}

/// Multiplies each sample by `exp(i·phase(ω))`.
pub fn apply_phase(field: &SampledMode, phase: impl Fn(f64) -> f64) -> SampledMode {
    field.map(|omega, v| v * Complex64::from_polar(1.0, phase(omega)))
}

/// Exact (unexpanded) propagation over `length_m` of air in `state`.
pub fn apply_spectral_phase(
    field: &SampledMode,
    state: &AirState,
    length_m: f64,
) -> Result<SampledMode> {
    let phases = field
        .grid()
        .omegas()
        .map(|w| spectral_phase(w, state, length_m))
        .collect::<Result<Vec<f64>>>()?;
    let values = field
        .values()
        .iter()
        .zip(phases)
        .map(|(v, p)| v * Complex64::from_polar(1.0, p))
        .collect();
    SampledMode::from_values(field.grid().clone(), values)
}

/// Offsets of the phase, group and GVD delays (seconds).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TimePerturbation {
    pub p_phi: f64,
    pub p_g: f64,
    pub p_gvd: f64,
}

impl TimePerturbation {
    /// Spectral phase added by the perturbation; exact for these parameters.
    pub fn phase(&self, pulse: &GaussianPulse, omega: f64) -> f64 {
        DelayTriple {
            t_phi: self.p_phi,
            t_g: self.p_g,
            t_gvd: self.p_gvd,
        }
        .expanded_phase(pulse.omega0(), omega)
    }

    /// Sum of the magnitudes of each term's phase at `ω₀ ± 2Δω`.
    pub fn guard_phase(&self, pulse: &GaussianPulse) -> f64 {
        let w0 = pulse.omega0();
        let d = 2.0 * pulse.delta_omega();
        (w0 * self.p_phi).abs() + (d * self.p_g).abs() + (d * d / w0 * self.p_gvd).abs()
    }

    pub fn check_linear(&self, pulse: &GaussianPulse) -> Result<()> {
        check_guard(self.guard_phase(pulse))
    }
}

/// Offsets of the length (m), the density factor X (dimensionless) and the
/// water-vapour pressure (Pa) from the reference path.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RangingPerturbation {
    pub p_length: f64,
    pub p_density: f64,
    pub p_water_vapor: f64,
}

impl RangingPerturbation {
    /// Exact spectral phase relative to the reference path, evaluated without
    /// forming the (large) absolute phases.
    pub fn phase(&self, path: &RangingPath, omega: f64) -> Result<f64> {
        let sigma = Wavenumber::from_angular_frequency(omega).map_err(grid_error)?;
        let k = air::k_dispersion(sigma)?;
        let g = air::water_term(sigma);
        let x0 = air::density_factor(path.state());
        let pw0 = path.state().water_vapor_pa();
        let n_perturbed =
            1.0 + k * (x0 + self.p_density) - g * (pw0 + self.p_water_vapor);
        let index_change = k * self.p_density - g * self.p_water_vapor;
        Ok(omega / SPEED_OF_LIGHT * (self.p_length * n_perturbed + path.length() * index_change))
    }

    /// Per-unit phase sensitivities `(∂φ/∂L, ∂φ/∂X, ∂φ/∂P_w)` at `omega`.
    pub fn sensitivities(path: &RangingPath, omega: f64) -> Result<[f64; 3]> {
        if omega <= 0.0 {
            return Ok([0.0; 3]);
        }
        let sigma = Wavenumber::from_angular_frequency(omega).map_err(grid_error)?;
        let n = air::phase_index(sigma, path.state())?;
        let k = air::k_dispersion(sigma)?;
        let g = air::water_term(sigma);
        let scale = omega / SPEED_OF_LIGHT;
        Ok([
            n * scale,
            k * scale * path.length(),
            -g * scale * path.length(),
        ])
    }

    pub fn guard_phase(&self, pulse: &GaussianPulse, path: &RangingPath) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for x in [-2.0, 2.0] {
            let s = Self::sensitivities(path, pulse.omega0() + x * pulse.delta_omega())?;
            let phase = (s[0] * self.p_length).abs()
                + (s[1] * self.p_density).abs()
                + (s[2] * self.p_water_vapor).abs();
            worst = worst.max(phase);
        }
        Ok(worst)
    }

    pub fn check_linear(&self, pulse: &GaussianPulse, path: &RangingPath) -> Result<()> {
        check_guard(self.guard_phase(pulse, path)?)
    }
}

fn check_guard(phase: f64) -> Result<()> {
    if !phase.is_finite() || phase >= LINEARITY_LIMIT_RAD {
        return Err(Error::LinearityGuard {
            phase,
            limit: LINEARITY_LIMIT_RAD,
        });
    }
    Ok(())
}

/// Either family of perturbation parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PerturbationVector {
    Time(TimePerturbation),
    Ranging(RangingPerturbation),
}

/// Field to first order in the perturbation: `u + Σ pᵢ Kᵢ wᵢ`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearizedField {
    unperturbed: SpectralMode,
    first_order: SpectralMode,
}

impl LinearizedField {
    pub fn unperturbed(&self) -> &SpectralMode {
        &self.unperturbed
    }

    /// `Σ pᵢ Kᵢ wᵢ`
    pub fn first_order(&self) -> &SpectralMode {
        &self.first_order
    }

    /// Norm of the first-order term relative to the unit-norm mean field.
    pub fn scale(&self) -> f64 {
        self.first_order.norm()
    }

    pub fn total(&self) -> SpectralMode {
        self.unperturbed
            .add_scaled(Complex64::new(1.0, 0.0), &self.first_order)
            .expect("both terms share the pulse")
    }
}

pub fn linearized_time_field(
    pulse: GaussianPulse,
    pert: &TimePerturbation,
) -> Result<LinearizedField> {
    pert.check_linear(&pulse)?;
    let modes = time_detection_modes(pulse);
    let terms = [
        (pert.p_phi, &modes.phi),
        (pert.p_g, &modes.group),
        (pert.p_gvd, &modes.gvd),
    ];
    assemble(pulse, &terms)
}

pub fn linearized_ranging_field(
    pulse: GaussianPulse,
    path: &RangingPath,
    pert: &RangingPerturbation,
) -> Result<LinearizedField> {
    pert.check_linear(&pulse, path)?;
    let modes = ranging_modes(pulse, path)?;
    let terms = [
        (pert.p_length, &modes.length),
        (pert.p_density, &modes.density),
        (pert.p_water_vapor, &modes.water_vapor),
    ];
    assemble(pulse, &terms)
}

pub fn linearized_field(
    pulse: GaussianPulse,
    path: &RangingPath,
    pert: &PerturbationVector,
) -> Result<LinearizedField> {
    match pert {
        PerturbationVector::Time(t) => linearized_time_field(pulse, t),
        PerturbationVector::Ranging(r) => linearized_ranging_field(pulse, path, r),
    }
}

pub(crate) fn assemble(
    pulse: GaussianPulse,
    terms: &[(f64, &crate::detection::DetectionMode)],
) -> Result<LinearizedField> {
    let mut first_order = SpectralMode::zero(pulse);
    for (p, mode) in terms {
        first_order = first_order.add_scaled(Complex64::new(p * mode.k_const(), 0.0), mode.mode())?;
    }
    Ok(LinearizedField {
        unperturbed: gaussian_mode(pulse),
        first_order,
    })
}
