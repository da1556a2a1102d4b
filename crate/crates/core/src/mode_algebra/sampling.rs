use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::f64::consts::SQRT_2;
use std::io::{self, Write};

use super::{hermite_functions, GaussianPulse, SpectralMode, MAX_ORDER};
use crate::error::{Error, Result};

/// Half-width, in units of Δω, that quadrature inner products must cover.
pub const STANDARD_COVERAGE: f64 = 8.0;
/// Narrower windows are accepted for basis projection of propagated fields,
/// whose phase is only defined for positive frequencies.
pub const MIN_PROJECTION_COVERAGE: f64 = 5.0;
pub const MIN_GRID_POINTS: usize = 2048;

/// Uniform frequency grid centred on a pulse's carrier.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralGrid {
    pulse: GaussianPulse,
    half_width: f64,
    points: usize,
}

impl SpectralGrid {
    /// Grid spanning `ω₀ ± half_width·Δω` with `points` samples including both ends.
    pub fn new(pulse: GaussianPulse, half_width: f64, points: usize) -> Result<Self> {
        if !half_width.is_finite() || half_width <= 0.0 {
            return Err(Error::invalid("half_width", "must be positive"));
        }
        if points < 3 {
            return Err(Error::invalid("points", "need at least 3 samples"));
        }
        Ok(SpectralGrid {
            pulse,
            half_width,
            points,
        })
    }

    /// `ω₀ ± 8Δω` with 4097 samples.
    pub fn standard(pulse: GaussianPulse) -> Self {
        SpectralGrid {
            pulse,
            half_width: STANDARD_COVERAGE,
            points: 4097,
        }
    }

    pub fn pulse(&self) -> &GaussianPulse {
        &self.pulse
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn len(&self) -> usize {
        self.points
    }

    pub fn is_empty(&self) -> bool {
        self.points == 0
    }

    pub fn step(&self) -> f64 {
        2.0 * self.half_width * self.pulse.delta_omega() / (self.points - 1) as f64
    }

    pub fn omega(&self, index: usize) -> f64 {
        let x = -self.half_width + 2.0 * self.half_width * index as f64 / (self.points - 1) as f64;
        self.pulse.omega0() + x * self.pulse.delta_omega()
    }

    pub fn omegas(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.points).map(|i| self.omega(i))
    }

    /// Trapezoid rule; spectrally accurate for Gaussian-damped integrands.
    pub fn integrate(&self, values: &[Complex64]) -> Result<Complex64> {
        if values.len() != self.points {
            return Err(Error::GridMismatch);
        }
        let interior: Complex64 = values.iter().sum();
        let ends = (values[0] + values[self.points - 1]) * 0.5;
        Ok((interior - ends) * self.step())
    }

    fn check(&self, required: f64, min_points: usize) -> Result<()> {
        if self.half_width < required || self.points < min_points {
            return Err(Error::InsufficientCoverage {
                covered: self.half_width,
                required,
                points: self.points,
                min_points,
            });
        }
        Ok(())
    }
}

/// Complex spectral amplitude sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledMode {
    grid: SpectralGrid,
    values: Vec<Complex64>,
}

impl SampledMode {
    pub fn from_fn(grid: SpectralGrid, mut f: impl FnMut(f64) -> Complex64) -> Self {
        let values = grid.omegas().map(&mut f).collect();
        SampledMode { grid, values }
    }

    pub fn from_values(grid: SpectralGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch);
        }
        Ok(SampledMode { grid, values })
    }

    pub fn grid(&self) -> &SpectralGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    /// Pointwise map `(ω, value) -> value'` on the same grid.
    pub fn map(&self, mut f: impl FnMut(f64, Complex64) -> Complex64) -> SampledMode {
        let values = self
            .grid
            .omegas()
            .zip(&self.values)
            .map(|(w, &v)| f(w, v))
            .collect();
        SampledMode {
            grid: self.grid.clone(),
            values,
        }
    }

    /// `∫|f|² dω` by the trapezoid rule, without a coverage check.
    pub fn energy(&self) -> f64 {
        let sq: Vec<Complex64> = self
            .values
            .iter()
            .map(|v| Complex64::new(v.norm_sqr(), 0.0))
            .collect();
        self.grid.integrate(&sq).map(|c| c.re).unwrap_or(f64::NAN)
    }

    /// Coefficients on `v_0..=v_max_order` by least squares over the grid
    /// window: solves `G c = b` with `G_mn = ∫ conj(v_m) v_n` and
    /// `b_m = ∫ conj(v_m) f` restricted to the window, which is exact for
    /// fields in the span even when the window truncates the basis.
    pub fn project(&self, max_order: usize) -> Result<SpectralMode> {
        if max_order > MAX_ORDER {
            return Err(Error::OrderOverflow {
                order: max_order,
                max: MAX_ORDER,
            });
        }
        self.grid
            .check(MIN_PROJECTION_COVERAGE, MIN_GRID_POINTS)?;
        let pulse = *self.grid.pulse();
        let size = max_order + 1;
        let mut gram = DMatrix::<f64>::zeros(size, size);
        let mut rhs_re = DVector::<f64>::zeros(size);
        let mut rhs_im = DVector::<f64>::zeros(size);
        let last = self.values.len() - 1;
        for (i, (omega, value)) in self.grid.omegas().zip(&self.values).enumerate() {
            let weight = if i == 0 || i == last { 0.5 } else { 1.0 };
            let y = pulse.normalized_detuning(omega) / SQRT_2;
            let envelope = pulse.envelope(omega);
            let basis: Vec<f64> = hermite_functions(y, max_order)
                .into_iter()
                .map(|h| h * envelope)
                .collect();
            for m in 0..size {
                // conj(i·h_m·u)·f = -i·h_m·u·f
                let b = Complex64::new(0.0, -weight * basis[m]) * value;
                rhs_re[m] += b.re;
                rhs_im[m] += b.im;
                for n in 0..=m {
                    gram[(m, n)] += weight * basis[m] * basis[n];
                }
            }
        }
        for m in 0..size {
            for n in 0..m {
                gram[(n, m)] = gram[(m, n)];
            }
        }
        let chol = gram.cholesky().ok_or(Error::InsufficientCoverage {
            covered: self.grid.half_width,
            required: MIN_PROJECTION_COVERAGE,
            points: self.grid.points,
            min_points: MIN_GRID_POINTS,
        })?;
        let re = chol.solve(&rhs_re);
        let im = chol.solve(&rhs_im);
        SpectralMode::from_coefficients(
            pulse,
            re.iter().zip(im.iter()).map(|(&a, &b)| Complex64::new(a, b)).collect(),
        )
    }

    /// Two-column text: `(ω - ω₀)/Δω` and the dimensionless amplitude
    /// `√Δω·Re[e^{-iθ} f(ω)]`, one sample per line.
    pub fn write_profile<W: Write>(&self, out: &mut W, phase: f64) -> io::Result<()> {
        let pulse = self.grid.pulse();
        let rot = Complex64::from_polar(1.0, -phase);
        let scale = pulse.delta_omega().sqrt();
        for (omega, v) in self.grid.omegas().zip(&self.values) {
            writeln!(
                out,
                "{:.6} {:.9e}",
                pulse.normalized_detuning(omega),
                scale * (rot * v).re
            )?;
        }
        Ok(())
    }
}

/// `∫ conj(f) g dω` on a shared grid covering `ω₀ ± 8Δω` with at least 2048 samples.
pub fn quadrature_inner_product(f: &SampledMode, g: &SampledMode) -> Result<Complex64> {
    if f.grid != g.grid {
        return Err(Error::GridMismatch);
    }
    f.grid.check(STANDARD_COVERAGE, MIN_GRID_POINTS)?;
    let products: Vec<Complex64> = f
        .values
        .iter()
        .zip(&g.values)
        .map(|(a, b)| a.conj() * b)
        .collect();
    f.grid.integrate(&products)
}
