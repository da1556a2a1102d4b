//! Refractive index of air after the updated Edlén equation of Bönsch and
//! Potulski.
//!
//! The phase index is written as `n - 1 = K(σ)·X(T, P, x) - g(σ)·P_w` with
//! σ the vacuum wavenumber in µm⁻¹. `K` carries all of the dispersion of dry
//! air, `X` all of its dependence on temperature, pressure and CO₂ content,
//! and `g` the (weakly dispersive) water-vapour correction.
//!
//! The density constant `D` is the published Bönsch–Potulski value
//! `93214.60 Pa`. A widely reproduced misprint (`932164.60`) makes `n - 1`
//! come out an order of magnitude too small for standard air.

use crate::error::{Error, Result};
use crate::SPEED_OF_LIGHT;

const A: f64 = 8091.37;
const B: f64 = 2_333_983.0;
const C: f64 = 15518.0;
const D: f64 = 93214.60;
const E: f64 = 0.5953;
const F: f64 = 0.009876;
const G: f64 = 0.0036610;
const H: f64 = 0.5327;
const I: f64 = 3.802;
const J: f64 = 0.0384;

/// Far-UV resonance, in µm⁻².
const POLE_FAR: f64 = 130.0;
/// Near-UV resonance, in µm⁻². Sets the upper edge of the valid band.
const POLE_NEAR: f64 = 38.9;
const POLE_GUARD: f64 = 1e-6;

/// Reference CO₂ content of the density factor, in percent.
pub const REFERENCE_CO2_PERCENT: f64 = 0.04;
pub const MIN_TEMPERATURE_C: f64 = -40.0;
pub const MAX_TEMPERATURE_C: f64 = 100.0;

/// Environmental state feeding the index model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AirState {
    temperature_c: f64,
    pressure_pa: f64,
    co2_percent: f64,
    water_vapor_pa: f64,
}

impl AirState {
    pub fn new(
        temperature_c: f64,
        pressure_pa: f64,
        co2_percent: f64,
        water_vapor_pa: f64,
    ) -> Result<Self> {
        if !temperature_c.is_finite()
            || !(MIN_TEMPERATURE_C..=MAX_TEMPERATURE_C).contains(&temperature_c)
        {
            return Err(Error::invalid(
                "temperature",
                format!(
                    "{temperature_c} °C is outside the model window [{MIN_TEMPERATURE_C}, {MAX_TEMPERATURE_C}] °C"
                ),
            ));
        }
        if !pressure_pa.is_finite() || pressure_pa < 0.0 {
            return Err(Error::invalid(
                "pressure",
                format!("{pressure_pa} Pa must be finite and non-negative"),
            ));
        }
        if !co2_percent.is_finite() || co2_percent < 0.0 {
            return Err(Error::invalid(
                "co2",
                format!("{co2_percent} % must be finite and non-negative"),
            ));
        }
        if !water_vapor_pa.is_finite() || water_vapor_pa < 0.0 {
            return Err(Error::invalid(
                "water_vapor_pressure",
                format!("{water_vapor_pa} Pa must be finite and non-negative"),
            ));
        }
        if water_vapor_pa > pressure_pa {
            return Err(Error::invalid(
                "water_vapor_pressure",
                format!("{water_vapor_pa} Pa exceeds total pressure {pressure_pa} Pa"),
            ));
        }
        Ok(AirState {
            temperature_c,
            pressure_pa,
            co2_percent,
            water_vapor_pa,
        })
    }

    /// Dry standard air: 20 °C, 101325 Pa, 0.04 % CO₂.
    pub fn standard_dry() -> Self {
        AirState {
            temperature_c: 20.0,
            pressure_pa: 101_325.0,
            co2_percent: REFERENCE_CO2_PERCENT,
            water_vapor_pa: 0.0,
        }
    }

    /// Zero pressure and zero humidity; the index model reduces to n = 1.
    pub fn vacuum() -> Self {
        AirState {
            temperature_c: 20.0,
            pressure_pa: 0.0,
            co2_percent: REFERENCE_CO2_PERCENT,
            water_vapor_pa: 0.0,
        }
    }

    pub fn with_water_vapor(self, water_vapor_pa: f64) -> Result<Self> {
        AirState::new(
            self.temperature_c,
            self.pressure_pa,
            self.co2_percent,
            water_vapor_pa,
        )
    }

    pub fn temperature_c(&self) -> f64 {
        self.temperature_c
    }

    pub fn pressure_pa(&self) -> f64 {
        self.pressure_pa
    }

    pub fn co2_percent(&self) -> f64 {
        self.co2_percent
    }

    pub fn water_vapor_pa(&self) -> f64 {
        self.water_vapor_pa
    }
}

/// Vacuum wavenumber σ = 1/λ in µm⁻¹.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Wavenumber(f64);

impl Wavenumber {
    pub fn new(sigma_per_um: f64) -> Result<Self> {
        if !sigma_per_um.is_finite() || sigma_per_um <= 0.0 {
            return Err(Error::invalid(
                "wavenumber",
                format!("sigma = {sigma_per_um} um^-1 must be positive"),
            ));
        }
        if sigma_per_um * sigma_per_um >= POLE_NEAR {
            return Err(Error::invalid(
                "wavenumber",
                format!(
                    "sigma = {sigma_per_um} um^-1 lies beyond the near-UV resonance (sigma^2 < {POLE_NEAR})"
                ),
            ));
        }
        Ok(Wavenumber(sigma_per_um))
    }

    pub fn from_wavelength(wavelength_m: f64) -> Result<Self> {
        if !wavelength_m.is_finite() || wavelength_m <= 0.0 {
            return Err(Error::invalid(
                "wavelength",
                format!("{wavelength_m} m must be positive"),
            ));
        }
        Wavenumber::new(1e-6 / wavelength_m)
    }

    pub fn from_angular_frequency(omega: f64) -> Result<Self> {
        if !omega.is_finite() || omega <= 0.0 {
            return Err(Error::invalid(
                "angular_frequency",
                format!("{omega} rad/s must be positive"),
            ));
        }
        Wavenumber::new(omega * SIGMA_PER_OMEGA)
    }

    pub fn per_um(self) -> f64 {
        self.0
    }

    pub fn wavelength(self) -> f64 {
        1e-6 / self.0
    }

    pub fn angular_frequency(self) -> f64 {
        self.0 / SIGMA_PER_OMEGA
    }
}

/// dσ/dω with σ in µm⁻¹ and ω in rad/s.
pub const SIGMA_PER_OMEGA: f64 = 1e-6 / (2.0 * std::f64::consts::PI * SPEED_OF_LIGHT);

/// A function value together with its first two derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Derivatives {
    pub value: f64,
    pub first: f64,
    pub second: f64,
}

impl Derivatives {
    /// Re-expresses σ-derivatives as derivatives with respect to ω.
    pub fn per_omega(self) -> Derivatives {
        Derivatives {
            value: self.value,
            first: self.first * SIGMA_PER_OMEGA,
            second: self.second * SIGMA_PER_OMEGA * SIGMA_PER_OMEGA,
        }
    }
}

pub(crate) fn k_raw(sigma: f64) -> f64 {
    let s2 = sigma * sigma;
    1e-8 * (A + B / (POLE_FAR - s2) + C / (POLE_NEAR - s2))
}

fn check_poles(sigma: Wavenumber) -> Result<()> {
    let s2 = sigma.0 * sigma.0;
    for pole in [POLE_FAR, POLE_NEAR] {
        if (pole - s2).abs() < POLE_GUARD {
            return Err(Error::PoleProximity {
                sigma: sigma.0,
                pole,
            });
        }
    }
    Ok(())
}

/// Dry-air dispersion function `K(σ)`.
pub fn k_dispersion(sigma: Wavenumber) -> Result<f64> {
    check_poles(sigma)?;
    Ok(k_raw(sigma.0))
}

/// `K(σ)`, `K'(σ)` and `K''(σ)` in closed form (derivatives per µm⁻¹).
pub fn k_derivatives(sigma: Wavenumber) -> Result<Derivatives> {
    check_poles(sigma)?;
    let s = sigma.0;
    let s2 = s * s;
    let far = POLE_FAR - s2;
    let near = POLE_NEAR - s2;
    Ok(Derivatives {
        value: k_raw(s),
        first: 1e-8 * (2.0 * B * s / (far * far) + 2.0 * C * s / (near * near)),
        second: 1e-8
            * (2.0 * B * (POLE_FAR + 3.0 * s2) / (far * far * far)
                + 2.0 * C * (POLE_NEAR + 3.0 * s2) / (near * near * near)),
    })
}

pub(crate) fn g_raw(sigma: f64) -> f64 {
    1e-10 * (I - J * sigma * sigma)
}

/// Water-vapour term `g(σ)` in Pa⁻¹.
pub fn water_term(sigma: Wavenumber) -> f64 {
    g_raw(sigma.0)
}

pub fn g_derivatives(sigma: Wavenumber) -> Derivatives {
    let s = sigma.0;
    Derivatives {
        value: g_raw(s),
        first: -2e-10 * J * s,
        second: -2e-10 * J,
    }
}

/// Density factor `X(T, P, x)`; dimensionless, zero at zero pressure.
pub fn density_factor(state: &AirState) -> f64 {
    let t = state.temperature_c;
    let p = state.pressure_pa;
    let co2 = 1.0 + H * (state.co2_percent - REFERENCE_CO2_PERCENT);
    p / D * (1.0 + 1e-8 * (E - F * t) * p) / (1.0 + G * t) * co2
}

/// Refractivity `n_φ - 1`, kept separate from `phase_index` so callers can
/// work with the small quantity directly.
pub fn refractivity(sigma: Wavenumber, state: &AirState) -> Result<f64> {
    Ok(k_dispersion(sigma)? * density_factor(state) - water_term(sigma) * state.water_vapor_pa)
}

pub fn phase_index(sigma: Wavenumber, state: &AirState) -> Result<f64> {
    Ok(1.0 + refractivity(sigma, state)?)
}

/// Group refractivity `n_g - 1 = (K + σK')X - (g + σg')P_w`.
pub fn group_refractivity(sigma: Wavenumber, state: &AirState) -> Result<f64> {
    let k = k_derivatives(sigma)?;
    let g = g_derivatives(sigma);
    let s = sigma.0;
    Ok((k.value + s * k.first) * density_factor(state)
        - (g.value + s * g.first) * state.water_vapor_pa)
}

pub fn group_index(sigma: Wavenumber, state: &AirState) -> Result<f64> {
    Ok(1.0 + group_refractivity(sigma, state)?)
}

/// Refractivity `n_φ - 1` and its first two σ-derivatives at fixed state.
pub fn refractivity_derivatives(sigma: Wavenumber, state: &AirState) -> Result<Derivatives> {
    let k = k_derivatives(sigma)?;
    let g = g_derivatives(sigma);
    let x = density_factor(state);
    let pw = state.water_vapor_pa;
    Ok(Derivatives {
        value: k.value * x - g.value * pw,
        first: k.first * x - g.first * pw,
        second: k.second * x - g.second * pw,
    })
}

/// Normalised logarithmic derivatives of `K` and `g` at the carrier.
///
/// These depend on the carrier frequency only, never on the air state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionScalars {
    /// ω₀ K'(ω₀) / K(ω₀)
    pub delta1: f64,
    /// ω₀² K''(ω₀) / (2 K(ω₀))
    pub delta2: f64,
    /// ω₀ g'(ω₀) / g(ω₀)
    pub eta1: f64,
    /// ω₀² g''(ω₀) / (2 g(ω₀))
    pub eta2: f64,
}

pub fn dispersion_scalars(omega0: f64) -> Result<DispersionScalars> {
    let sigma = Wavenumber::from_angular_frequency(omega0)?;
    let k = k_derivatives(sigma)?.per_omega();
    let g = g_derivatives(sigma).per_omega();
    Ok(DispersionScalars {
        delta1: omega0 * k.first / k.value,
        delta2: omega0 * omega0 * k.second / (2.0 * k.value),
        eta1: omega0 * g.first / g.value,
        eta2: omega0 * omega0 * g.second / (2.0 * g.value),
    })
}
