use num_complex::Complex64;

use super::{DetectionMode, ModeLabel, Parameter};
use crate::air::SIGMA_PER_OMEGA;
use crate::dispersion::{
    RangingPath, RangingPerturbation, TimePerturbation, LINEARITY_LIMIT_RAD,
};
use crate::error::{Error, Result};
use crate::mode_algebra::{
    gaussian_mode, GaussianPulse, SampledMode, SpectralGrid, MAX_ORDER, MIN_PROJECTION_COVERAGE,
    STANDARD_COVERAGE,
};

const ORACLE_POINTS: usize = 4097;
const TARGET_EXCURSION_RAD: f64 = 1e-3;
const NOISE_FLOOR_RAD: f64 = 1e-9;
// Keeps the grid clear of the 38.9 µm⁻² pole of K.
const MAX_SIGMA_PER_UM: f64 = 6.2;

enum Perturbation {
    Time(TimePerturbation),
    Ranging(RangingPerturbation),
}

fn unit_perturbation(parameter: Parameter, step: f64) -> Perturbation {
    match parameter {
        Parameter::PhaseDelay => Perturbation::Time(TimePerturbation {
            p_phi: step,
            ..Default::default()
        }),
        Parameter::GroupDelay => Perturbation::Time(TimePerturbation {
            p_g: step,
            ..Default::default()
        }),
        Parameter::GvdDelay => Perturbation::Time(TimePerturbation {
            p_gvd: step,
            ..Default::default()
        }),
        Parameter::Length => Perturbation::Ranging(RangingPerturbation {
            p_length: step,
            ..Default::default()
        }),
        Parameter::Density => Perturbation::Ranging(RangingPerturbation {
            p_density: step,
            ..Default::default()
        }),
        Parameter::WaterVapor => Perturbation::Ranging(RangingPerturbation {
            p_water_vapor: step,
            ..Default::default()
        }),
    }
}

impl Perturbation {
    fn guard_phase(&self, pulse: &GaussianPulse, path: &RangingPath) -> Result<f64> {
        match self {
            Perturbation::Time(t) => Ok(t.guard_phase(pulse)),
            Perturbation::Ranging(r) => r.guard_phase(pulse, path),
        }
    }

    fn phase(&self, pulse: &GaussianPulse, path: &RangingPath, omega: f64) -> Result<f64> {
        match self {
            Perturbation::Time(t) => Ok(t.phase(pulse, omega)),
            Perturbation::Ranging(r) => r.phase(path, omega),
        }
    }
}

/// Step giving a first-order phase excursion of 1 mrad at `ω₀ ± 2Δω`.
pub fn default_step(parameter: Parameter, pulse: &GaussianPulse, path: &RangingPath) -> Result<f64> {
    let per_unit = unit_perturbation(parameter, 1.0).guard_phase(pulse, path)?;
    if !per_unit.is_finite() || per_unit <= 0.0 {
        return Err(Error::invalid("parameter", "no phase sensitivity"));
    }
    Ok(TARGET_EXCURSION_RAD / per_unit)
}

fn oracle_grid(pulse: GaussianPulse) -> Result<SpectralGrid> {
    let dw = pulse.delta_omega();
    let sigma_limit = (MAX_SIGMA_PER_UM / SIGMA_PER_OMEGA - pulse.omega0()) / dw;
    let half_width = STANDARD_COVERAGE
        .min(0.9 * pulse.omega0() / dw)
        .min(sigma_limit);
    if half_width < MIN_PROJECTION_COVERAGE {
        return Err(Error::InsufficientCoverage {
            covered: half_width,
            required: MIN_PROJECTION_COVERAGE,
            points: ORACLE_POINTS,
            min_points: ORACLE_POINTS,
        });
    }
    SpectralGrid::new(pulse, half_width, ORACLE_POINTS)
}

/// Detection mode by central finite difference of the exactly propagated
/// mean field, projected onto `v₀..v₈`.
///
/// `K` is the quadrature norm of the sampled derivative. `step` defaults to
/// [`default_step`]; steps whose phase excursion exceeds the linearity limit
/// or falls below 1 nrad are rejected.
pub fn numeric_detection_mode(
    parameter: Parameter,
    pulse: GaussianPulse,
    path: &RangingPath,
    step: Option<f64>,
) -> Result<DetectionMode> {
    let h = match step {
        Some(h) => h,
        None => default_step(parameter, &pulse, path)?,
    };
    if !h.is_finite() || h <= 0.0 {
        return Err(Error::invalid("step", format!("{h} must be positive")));
    }
    let plus = unit_perturbation(parameter, h);
    let minus = unit_perturbation(parameter, -h);
    let excursion = plus.guard_phase(&pulse, path)?;
    if excursion >= LINEARITY_LIMIT_RAD {
        return Err(Error::LinearityGuard {
            phase: excursion,
            limit: LINEARITY_LIMIT_RAD,
        });
    }
    if excursion < NOISE_FLOOR_RAD {
        return Err(Error::StepTooSmall { phase: excursion });
    }

    let grid = oracle_grid(pulse)?;
    let u = gaussian_mode(pulse).sample(&grid)?;
    let mut values = Vec::with_capacity(grid.len());
    for (omega, &field) in grid.omegas().zip(u.values()) {
        let up = plus.phase(&pulse, path, omega)?;
        let down = minus.phase(&pulse, path, omega)?;
        let difference = Complex64::from_polar(1.0, up) - Complex64::from_polar(1.0, down);
        values.push(field * difference / (2.0 * h));
    }
    let derivative = SampledMode::from_values(grid, values)?;
    let k_const = derivative.energy().sqrt();
    let mode = derivative.project(MAX_ORDER)?.normalized()?;
    DetectionMode::new(ModeLabel::Detection(parameter), mode, k_const)
}
