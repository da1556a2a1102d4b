//! Spectral modes on the Hermite-Gauss basis of a Gaussian pulse.
//!
//! A mode is stored as its coefficients on `v_n(ω) = i·h_n(y)·u(ω)`, where
//! `u` is the Gaussian mean-field mode, `y = (ω - ω₀)/(√2 Δω)` and `h_n` the
//! normalised Hermite polynomial `H_n/√(2ⁿ n!)`. The global factor `i` lives in
//! the basis so detection modes have real coefficients. Inner products are
//! exact in this representation; sampling onto a frequency grid is derived
//! and mostly serves as an independent quadrature check.

mod gram_schmidt;
mod sampling;

pub use gram_schmidt::{gram_schmidt, INDEPENDENCE_TOLERANCE};
pub(crate) use gram_schmidt::remove_projections;
pub use sampling::{
    quadrature_inner_product, SampledMode, SpectralGrid, MIN_GRID_POINTS, MIN_PROJECTION_COVERAGE,
    STANDARD_COVERAGE,
};

use num_complex::Complex64;
use std::f64::consts::{PI, SQRT_2};

use crate::error::{Error, Result};

/// Highest Hermite-Gauss order a mode may carry.
pub const MAX_ORDER: usize = 8;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Gaussian comb envelope: mean frequency and spectral standard deviation of `|u|²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPulse {
    omega0: f64,
    delta_omega: f64,
}

impl GaussianPulse {
    /// Requires `0 < Δω ≤ ω₀/2` so the second-order phase expansion stays meaningful.
    pub fn new(omega0: f64, delta_omega: f64) -> Result<Self> {
        if !omega0.is_finite() || omega0 <= 0.0 {
            return Err(Error::invalid(
                "omega0",
                format!("{omega0} rad/s must be positive"),
            ));
        }
        if !delta_omega.is_finite() || delta_omega <= 0.0 {
            return Err(Error::invalid(
                "delta_omega",
                format!("{delta_omega} rad/s must be positive"),
            ));
        }
        if delta_omega > omega0 / 2.0 {
            return Err(Error::invalid(
                "delta_omega",
                format!("{delta_omega} rad/s exceeds omega0/2 = {} rad/s", omega0 / 2.0),
            ));
        }
        Ok(GaussianPulse {
            omega0,
            delta_omega,
        })
    }

    /// Pulse centred at a vacuum wavelength with `Δω = ratio·ω₀`.
    pub fn from_wavelength(wavelength_m: f64, bandwidth_ratio: f64) -> Result<Self> {
        if !wavelength_m.is_finite() || wavelength_m <= 0.0 {
            return Err(Error::invalid(
                "wavelength",
                format!("{wavelength_m} m must be positive"),
            ));
        }
        let omega0 = 2.0 * PI * crate::SPEED_OF_LIGHT / wavelength_m;
        GaussianPulse::new(omega0, bandwidth_ratio * omega0)
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn delta_omega(&self) -> f64 {
        self.delta_omega
    }

    pub fn wavelength(&self) -> f64 {
        2.0 * PI * crate::SPEED_OF_LIGHT / self.omega0
    }

    /// Intensity FWHM of the Fourier-limited pulse, `√(2 ln 2)/Δω`.
    pub fn fwhm_duration(&self) -> f64 {
        (2.0 * std::f64::consts::LN_2).sqrt() / self.delta_omega
    }

    /// `(ω - ω₀)/Δω`
    pub fn normalized_detuning(&self, omega: f64) -> f64 {
        (omega - self.omega0) / self.delta_omega
    }

    /// The real Gaussian mean-field mode `u(ω)`, unit L² norm.
    pub fn envelope(&self, omega: f64) -> f64 {
        let x = self.normalized_detuning(omega);
        (-x * x / 4.0).exp() / (self.delta_omega.sqrt() * (2.0 * PI).powf(0.25))
    }
}

/// `h_n(y) = H_n(y)/√(2ⁿ n!)` for `n = 0..=max_order`, by the normalised recurrence.
pub(crate) fn hermite_functions(y: f64, max_order: usize) -> Vec<f64> {
    let mut h = Vec::with_capacity(max_order + 1);
    h.push(1.0);
    if max_order >= 1 {
        h.push(SQRT_2 * y);
    }
    for n in 1..max_order {
        let nf = n as f64;
        let next = (2.0 / (nf + 1.0)).sqrt() * y * h[n] - (nf / (nf + 1.0)).sqrt() * h[n - 1];
        h.push(next);
    }
    h
}

/// A spectral mode as coefficients on the Hermite-Gauss basis of its pulse.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralMode {
    pulse: GaussianPulse,
    coefficients: Vec<Complex64>,
}

impl SpectralMode {
    pub fn from_coefficients(pulse: GaussianPulse, coefficients: Vec<Complex64>) -> Result<Self> {
        if coefficients.len() > MAX_ORDER + 1 {
            return Err(Error::OrderOverflow {
                order: coefficients.len() - 1,
                max: MAX_ORDER,
            });
        }
        if coefficients.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::invalid("coefficients", "must be finite"));
        }
        Ok(SpectralMode {
            pulse,
            coefficients,
        })
    }

    pub fn from_real(pulse: GaussianPulse, coefficients: &[f64]) -> Result<Self> {
        SpectralMode::from_coefficients(
            pulse,
            coefficients.iter().map(|&c| Complex64::new(c, 0.0)).collect(),
        )
    }

    pub fn zero(pulse: GaussianPulse) -> Self {
        SpectralMode {
            pulse,
            coefficients: Vec::new(),
        }
    }

    pub fn pulse(&self) -> &GaussianPulse {
        &self.pulse
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    /// Coefficient on `v_n`; zero beyond the stored order.
    pub fn coefficient(&self, n: usize) -> Complex64 {
        self.coefficients
            .get(n)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Real parts of the first `len` coefficients, zero-padded.
    pub fn real_coefficients(&self, len: usize) -> Vec<f64> {
        (0..len).map(|n| self.coefficient(n).re).collect()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coefficients.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scaled(&self, factor: Complex64) -> SpectralMode {
        SpectralMode {
            pulse: self.pulse,
            coefficients: self.coefficients.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn scaled_real(&self, factor: f64) -> SpectralMode {
        self.scaled(Complex64::new(factor, 0.0))
    }

    /// Unit-norm copy; errors on the zero mode.
    pub fn normalized(&self) -> Result<SpectralMode> {
        let norm = self.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::invalid("mode", "cannot normalize a zero mode"));
        }
        Ok(self.scaled_real(1.0 / norm))
    }

    /// `self + factor·other`
    pub fn add_scaled(&self, factor: Complex64, other: &SpectralMode) -> Result<SpectralMode> {
        if self.pulse != other.pulse {
            return Err(Error::PulseMismatch);
        }
        let len = self.coefficients.len().max(other.coefficients.len());
        let coefficients = (0..len)
            .map(|n| self.coefficient(n) + factor * other.coefficient(n))
            .collect();
        Ok(SpectralMode {
            pulse: self.pulse,
            coefficients,
        })
    }

    /// Highest order carrying a non-zero coefficient.
    pub fn order(&self) -> usize {
        self.coefficients
            .iter()
            .rposition(|c| c.norm_sqr() > 0.0)
            .unwrap_or(0)
    }

    /// Complex spectral amplitude at angular frequency `omega`.
    pub fn value_at(&self, omega: f64) -> Complex64 {
        if self.coefficients.is_empty() {
            return Complex64::new(0.0, 0.0);
        }
        let y = self.pulse.normalized_detuning(omega) / SQRT_2;
        let h = hermite_functions(y, self.coefficients.len() - 1);
        let sum: Complex64 = self.coefficients.iter().zip(&h).map(|(c, hn)| c * hn).sum();
        I * sum * self.pulse.envelope(omega)
    }

    pub fn sample(&self, grid: &SpectralGrid) -> Result<SampledMode> {
        if grid.pulse() != &self.pulse {
            return Err(Error::PulseMismatch);
        }
        Ok(SampledMode::from_fn(grid.clone(), |omega| self.value_at(omega)))
    }
}

/// The Gaussian mean-field mode `u = -i·v₀`.
pub fn gaussian_mode(pulse: GaussianPulse) -> SpectralMode {
    SpectralMode {
        pulse,
        coefficients: vec![-I],
    }
}

/// Basis mode `v_n`.
pub fn hermite_gauss(n: usize, pulse: GaussianPulse) -> Result<SpectralMode> {
    if n > MAX_ORDER {
        return Err(Error::OrderOverflow {
            order: n,
            max: MAX_ORDER,
        });
    }
    let mut coefficients = vec![Complex64::new(0.0, 0.0); n + 1];
    coefficients[n] = Complex64::new(1.0, 0.0);
    Ok(SpectralMode {
        pulse,
        coefficients,
    })
}

/// `⟨f, g⟩ = Σ conj(f_k) g_k`, antilinear in the first argument.
pub fn inner_product(f: &SpectralMode, g: &SpectralMode) -> Result<Complex64> {
    if f.pulse != g.pulse {
        return Err(Error::PulseMismatch);
    }
    Ok(f.coefficients
        .iter()
        .zip(&g.coefficients)
        .map(|(a, b)| a.conj() * b)
        .sum())
}
