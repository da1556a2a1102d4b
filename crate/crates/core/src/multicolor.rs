//! Two- and three-wavelength interferometry baselines.
//!
//! Each scheme combines phase lengths `L_φᵢ = n_φ(λᵢ)L` with fixed weights
//! `wᵢ` (summing to one) so that the first-order dependence on the air
//! density factor X, and for 3WI on the water-vapour pressure, cancels.
//! Shot noise of the channels adds in quadrature.

use std::fmt;
use std::io::{self, Write};

use crate::air::{self, AirState, Wavenumber};
use crate::error::{Error, Result};
use crate::SPEED_OF_LIGHT;

/// Two or three distinct wavelengths with the photon number of each channel.
#[derive(Debug, Clone, PartialEq)]
pub struct WavelengthSet {
    wavelengths: Vec<f64>,
    photons: Vec<f64>,
}

impl WavelengthSet {
    pub fn new(wavelengths: Vec<f64>, photons: Vec<f64>) -> Result<Self> {
        if !(2..=3).contains(&wavelengths.len()) {
            return Err(Error::invalid(
                "wavelengths",
                format!("need 2 or 3 wavelengths, got {}", wavelengths.len()),
            ));
        }
        if photons.len() != wavelengths.len() {
            return Err(Error::invalid(
                "photons",
                "one photon number per wavelength is required",
            ));
        }
        for &l in &wavelengths {
            Wavenumber::from_wavelength(l)?;
        }
        for (i, a) in wavelengths.iter().enumerate() {
            for b in &wavelengths[i + 1..] {
                if a == b {
                    return Err(Error::DegenerateWavelengths(*a, *b));
                }
            }
        }
        if let Some(n) = photons.iter().find(|n| !n.is_finite() || **n < 1.0) {
            return Err(Error::invalid("photons", format!("{n} must be at least 1")));
        }
        Ok(WavelengthSet {
            wavelengths,
            photons,
        })
    }

    /// Splits `total_photons` evenly over the channels.
    pub fn uniform(wavelengths: Vec<f64>, total_photons: f64) -> Result<Self> {
        let n = wavelengths.len().max(1) as f64;
        let photons = vec![total_photons / n; wavelengths.len()];
        WavelengthSet::new(wavelengths, photons)
    }

    pub fn wavelengths(&self) -> &[f64] {
        &self.wavelengths
    }

    pub fn photons(&self) -> &[f64] {
        &self.photons
    }

    pub fn total_photons(&self) -> f64 {
        self.photons.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.wavelengths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.wavelengths.is_empty()
    }

    /// Per-channel phase-length resolution `c/(2√Nᵢ ωᵢ)`.
    pub fn channel_shot_noise(&self) -> Vec<f64> {
        self.wavelengths
            .iter()
            .zip(&self.photons)
            .map(|(&l, &n)| single_wavelength_shot_noise(l, n))
            .collect()
    }
}

/// `c/(2√N ω)` for one wavelength.
pub fn single_wavelength_shot_noise(wavelength_m: f64, photons: f64) -> f64 {
    let omega = 2.0 * std::f64::consts::PI * SPEED_OF_LIGHT / wavelength_m;
    SPEED_OF_LIGHT / (2.0 * photons.sqrt() * omega)
}

/// `n_φ(λᵢ)·L` per wavelength.
pub fn phase_lengths(ws: &WavelengthSet, state: &AirState, length_m: f64) -> Result<Vec<f64>> {
    Ok(excess_phase_lengths(ws, state, length_m)?
        .into_iter()
        .map(|e| length_m + e)
        .collect())
}

/// `(n_φ(λᵢ) - 1)·L` per wavelength; combinations of these avoid the
/// cancellation of the common `L`.
pub fn excess_phase_lengths(
    ws: &WavelengthSet,
    state: &AirState,
    length_m: f64,
) -> Result<Vec<f64>> {
    ws.wavelengths
        .iter()
        .map(|&l| Ok(air::refractivity(Wavenumber::from_wavelength(l)?, state)? * length_m))
        .collect()
}

fn dispersion_at(wavelength_m: f64) -> Result<(f64, f64)> {
    let sigma = Wavenumber::from_wavelength(wavelength_m)?;
    Ok((air::k_dispersion(sigma)?, air::water_term(sigma)))
}

/// `α = K(λ₁)/(K(λ₂) - K(λ₁))`.
pub fn alpha_2wi(l1: f64, l2: f64) -> Result<f64> {
    let (k1, _) = dispersion_at(l1)?;
    let (k2, _) = dispersion_at(l2)?;
    if l1 == l2 || k2 == k1 {
        return Err(Error::DegenerateWavelengths(l1, l2));
    }
    Ok(k1 / (k2 - k1))
}

/// Weights of a multi-wavelength length estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct MulticolorCombination {
    pub wavelengths: Vec<f64>,
    /// `α` for 2WI, `(β, γ)` for 3WI.
    pub coefficients: Vec<f64>,
    /// Weights on the phase lengths, summing to one.
    pub weights: Vec<f64>,
    /// `Σ wᵢ K(λᵢ)`: remaining sensitivity to X per unit length.
    pub residual_density: f64,
    /// `-Σ wᵢ g(λᵢ)`: remaining sensitivity to `P_w` per unit length, 1/Pa.
    pub residual_water_vapor: f64,
}

impl MulticolorCombination {
    fn from_weights(wavelengths: Vec<f64>, coefficients: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        let mut residual_density = 0.0;
        let mut residual_water_vapor = 0.0;
        for (&l, w) in wavelengths.iter().zip(&weights) {
            let (k, g) = dispersion_at(l)?;
            residual_density += w * k;
            residual_water_vapor -= w * g;
        }
        Ok(MulticolorCombination {
            wavelengths,
            coefficients,
            weights,
            residual_density,
            residual_water_vapor,
        })
    }

    /// `Σ wᵢ xᵢ`
    pub fn combine(&self, values: &[f64]) -> Result<f64> {
        if values.len() != self.weights.len() {
            return Err(Error::invalid(
                "values",
                format!("expected {} entries, got {}", self.weights.len(), values.len()),
            ));
        }
        Ok(self.weights.iter().zip(values).map(|(w, v)| w * v).sum())
    }

    /// `√(Σ wᵢ² δLᵢ²)`
    pub fn shot_noise(&self, ws: &WavelengthSet) -> Result<f64> {
        if ws.wavelengths != self.wavelengths {
            return Err(Error::invalid(
                "wavelengths",
                "combination was built for a different wavelength set",
            ));
        }
        Ok(self
            .weights
            .iter()
            .zip(ws.channel_shot_noise())
            .map(|(w, d)| (w * d).powi(2))
            .sum::<f64>()
            .sqrt())
    }
}

/// `L = (1 + α)L_φ₁ - α L_φ₂`
pub fn combination_2wi(l1: f64, l2: f64) -> Result<MulticolorCombination> {
    let alpha = alpha_2wi(l1, l2)?;
    MulticolorCombination::from_weights(vec![l1, l2], vec![alpha], vec![1.0 + alpha, -alpha])
}

/// `(β, γ)` such that `L_φ₁ + β(L_φ₂ - L_φ₁) + γ(L_φ₃ - L_φ₁)` is first-order
/// independent of both X and `P_w`.
pub fn synth_3wi(l1: f64, l2: f64, l3: f64) -> Result<MulticolorCombination> {
    if l1 == l2 || l1 == l3 || l2 == l3 {
        return Err(Error::DegenerateWavelengths(l1, if l1 == l2 { l2 } else { l3 }));
    }
    let (k1, g1) = dispersion_at(l1)?;
    let (k2, g2) = dispersion_at(l2)?;
    let (k3, g3) = dispersion_at(l3)?;
    let (a11, a12, a21, a22) = (k2 - k1, k3 - k1, g2 - g1, g3 - g1);
    let det = a11 * a22 - a12 * a21;
    let scale = (a11 * a22).abs().max((a12 * a21).abs());
    if scale == 0.0 || det.abs() <= 1e-12 * scale {
        return Err(Error::ColinearDispersion);
    }
    let beta = (-k1 * a22 + g1 * a12) / det;
    let gamma = (-g1 * a11 + k1 * a21) / det;
    MulticolorCombination::from_weights(
        vec![l1, l2, l3],
        vec![beta, gamma],
        vec![1.0 - beta - gamma, beta, gamma],
    )
}

/// `√((1 + α)²δL₁² + α²δL₂²)`
pub fn shot_noise_2wi(ws: &WavelengthSet) -> Result<f64> {
    if ws.len() != 2 {
        return Err(Error::invalid("wavelengths", "2WI needs exactly two wavelengths"));
    }
    combination_2wi(ws.wavelengths[0], ws.wavelengths[1])?.shot_noise(ws)
}

/// `√((1 - β - γ)²δL₁² + β²δL₂² + γ²δL₃²)`
pub fn shot_noise_3wi(ws: &WavelengthSet, combination: &MulticolorCombination) -> Result<f64> {
    if ws.len() != 3 {
        return Err(Error::invalid("wavelengths", "3WI needs exactly three wavelengths"));
    }
    combination.shot_noise(ws)
}

/// Error of the dry-air 2WI estimate in moist air: `L_φ₁ + α(L_φ₁ - L_φ₂) - L`.
pub fn humidity_systematic_2wi(ws: &WavelengthSet, state: &AirState, length_m: f64) -> Result<f64> {
    if ws.len() != 2 {
        return Err(Error::invalid("wavelengths", "2WI needs exactly two wavelengths"));
    }
    let combination = combination_2wi(ws.wavelengths[0], ws.wavelengths[1])?;
    combination.combine(&excess_phase_lengths(ws, state, length_m)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    TwoWavelength,
    ThreeWavelength,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::TwoWavelength => "2wi",
            Scheme::ThreeWavelength => "3wi",
        })
    }
}

/// One line of the scheme comparison table.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub scheme: Scheme,
    pub wavelengths: Vec<f64>,
    pub photons: f64,
    pub combination: MulticolorCombination,
    pub shot_noise: f64,
    /// Error of the combination over `length_m` of air in `state`.
    pub humidity_bias: f64,
}

impl ComparisonRow {
    pub fn compute(ws: &WavelengthSet, state: &AirState, length_m: f64) -> Result<Self> {
        let w = ws.wavelengths();
        let (scheme, combination) = match ws.len() {
            2 => (Scheme::TwoWavelength, combination_2wi(w[0], w[1])?),
            _ => (Scheme::ThreeWavelength, synth_3wi(w[0], w[1], w[2])?),
        };
        Ok(ComparisonRow {
            scheme,
            wavelengths: w.to_vec(),
            photons: ws.total_photons(),
            shot_noise: combination.shot_noise(ws)?,
            humidity_bias: combination.combine(&excess_phase_lengths(ws, state, length_m)?)?,
            combination,
        })
    }
}

pub const COMPARISON_HEADER: &str =
    "scheme,wavelengths_nm,photons,alpha,beta,gamma,delta_l_shot_m,humidity_bias_m";

/// CSV with [`COMPARISON_HEADER`]; wavelengths are `;`-separated within their field.
pub fn write_comparison_csv<W: Write>(out: &mut W, rows: &[ComparisonRow]) -> io::Result<()> {
    writeln!(out, "{COMPARISON_HEADER}")?;
    for row in rows {
        let wavelengths: Vec<String> = row
            .wavelengths
            .iter()
            .map(|l| format!("{}", (l * 1e9 * 1e6).round() / 1e6))
            .collect();
        let c = &row.combination.coefficients;
        let (alpha, beta, gamma) = match row.scheme {
            Scheme::TwoWavelength => (format!("{:.9e}", c[0]), String::new(), String::new()),
            Scheme::ThreeWavelength => (String::new(), format!("{:.9e}", c[0]), format!("{:.9e}", c[1])),
        };
        writeln!(
            out,
            "{},{},{:e},{},{},{},{:.6e},{:.6e}",
            row.scheme,
            wavelengths.join(";"),
            row.photons,
            alpha,
            beta,
            gamma,
            row.shot_noise,
            row.humidity_bias
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn alpha_green_infrared() {
        let a = alpha_2wi(1064e-9, 532e-9).unwrap();
        assert!((55.0..75.0).contains(&a), "{a}");
        assert_relative_eq!(alpha_2wi(532e-9, 1064e-9).unwrap(), -(1.0 + a), max_relative = 1e-12);
        assert!(matches!(
            alpha_2wi(800e-9, 800e-9),
            Err(Error::DegenerateWavelengths(..))
        ));
    }

    #[test]
    fn eq21_value() {
        let ws = WavelengthSet::new(vec![1064e-9, 532e-9], vec![4e16; 2]).unwrap();
        let d = shot_noise_2wi(&ws).unwrap();
        assert!((2e-14..4e-14).contains(&d), "{d}");
    }

    #[test]
    fn three_colour_cancels_dispersion() {
        let c = synth_3wi(1064e-9, 532e-9, 355e-9).unwrap();
        let (k1, g1) = dispersion_at(1064e-9).unwrap();
        assert!(c.residual_density.abs() < 1e-12 * k1);
        assert!(c.residual_water_vapor.abs() < 1e-12 * g1);
        assert_relative_eq!(c.weights.iter().sum::<f64>(), 1.0, max_relative = 1e-12);
        let ws = WavelengthSet::uniform(vec![1064e-9, 532e-9, 355e-9], 8e16).unwrap();
        let d = shot_noise_3wi(&ws, &c).unwrap();
        assert!((3e-13..3e-12).contains(&d), "{d}");
    }

    #[test]
    fn zero_coefficients_reduce_to_single_channel() {
        let ws = WavelengthSet::uniform(vec![1064e-9, 532e-9, 355e-9], 3e16).unwrap();
        let c = MulticolorCombination::from_weights(
            ws.wavelengths().to_vec(),
            vec![0.0, 0.0],
            vec![1.0, 0.0, 0.0],
        )
        .unwrap();
        assert_relative_eq!(
            shot_noise_3wi(&ws, &c).unwrap(),
            single_wavelength_shot_noise(1064e-9, 1e16),
            max_relative = 1e-15
        );
    }

    #[test]
    fn set_validation() {
        assert!(WavelengthSet::new(vec![800e-9], vec![1.0]).is_err());
        assert!(WavelengthSet::new(vec![800e-9, 800e-9], vec![1.0, 1.0]).is_err());
        assert!(WavelengthSet::new(vec![800e-9, 600e-9], vec![1.0, 0.5]).is_err());
        assert!(WavelengthSet::new(vec![800e-9, 600e-9], vec![1.0]).is_err());
    }

    #[test]
    fn csv_layout() {
        let ws = WavelengthSet::uniform(vec![1064e-9, 532e-9], 8e16).unwrap();
        let row = ComparisonRow::compute(&ws, &AirState::standard_dry(), 1.0).unwrap();
        let mut buf = Vec::new();
        write_comparison_csv(&mut buf, &[row]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], COMPARISON_HEADER);
        let fields: Vec<&str> = lines[1].split(',').collect();
        assert_eq!(fields.len(), 8);
        assert_eq!(fields[0], "2wi");
        assert_eq!(fields[1], "1064;532");
        assert!(fields[4].is_empty());
    }
}
