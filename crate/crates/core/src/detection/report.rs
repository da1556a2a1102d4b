use std::fmt;

use super::{
    contamination_matrix, min_detectable, numeric_detection_mode, purified_ranging_sensitivity,
    purify, ranging_modes, time_detection_modes, ContaminationMatrix, DetectionMode, Parameter,
    PurifiedRanging,
};
use crate::dispersion::RangingPath;
use crate::error::Result;
use crate::mode_algebra::{GaussianPulse, MAX_ORDER};
use crate::multicolor::{self, WavelengthSet};

/// One row of the sensitivity table.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterSensitivity {
    pub label: String,
    /// Unit of the parameter; `K` carries its inverse.
    pub unit: &'static str,
    pub k_const: f64,
    pub min_detectable: f64,
}

impl ParameterSensitivity {
    fn from_mode(mode: &DetectionMode, photons: f64) -> Result<Self> {
        Ok(ParameterSensitivity {
            label: mode.label().to_string(),
            unit: mode.label().parameter().unit(),
            k_const: mode.k_const(),
            min_detectable: min_detectable(mode.k_const(), photons)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SensitivityReport {
    pub photons: f64,
    pub pulse: GaussianPulse,
    pub length_m: f64,
    pub time: Vec<ParameterSensitivity>,
    pub ranging: Vec<ParameterSensitivity>,
    pub contamination: ContaminationMatrix,
    /// `(1/L)(K_X/K_L)⟨w_L, w_X⟩`
    pub density_prefactor: f64,
    /// `(1/L)(K_Pw/K_L)⟨w_L, w_Pw⟩`, per pascal
    pub water_vapor_prefactor: f64,
    pub purified: PurifiedRanging,
    /// Largest coefficient difference between the analytic `w_L` and the
    /// finite-difference mode of the actual path.
    pub length_mode_discrepancy: f64,
    /// Relative change of `K_L^p` when the path length is multiplied by 10.
    pub purified_length_dependence: f64,
    /// 1064/532 nm with `N/2` photons each.
    pub baseline_2wi: f64,
    /// 1064/532/355 nm with `N/3` photons each.
    pub baseline_3wi: f64,
}

pub fn contamination_report(
    pulse: GaussianPulse,
    path: &RangingPath,
    photons: f64,
) -> Result<SensitivityReport> {
    let t = time_detection_modes(pulse);
    let phi_p = purify(&t.phi, &[&t.group, &t.gvd])?;
    let gvd_p = purify(&t.gvd, &[&t.phi, &t.group])?;
    let time = [&t.phi, &t.group, &t.gvd, &phi_p, &gvd_p]
        .into_iter()
        .map(|m| ParameterSensitivity::from_mode(m, photons))
        .collect::<Result<Vec<_>>>()?;

    let modes = ranging_modes(pulse, path)?;
    let purified = purified_ranging_sensitivity(&modes, photons)?;
    let ranging = [
        &modes.length,
        &modes.density,
        &modes.water_vapor,
        &purified.full,
        &purified.x_only,
    ]
    .into_iter()
    .map(|m| ParameterSensitivity::from_mode(m, photons))
    .collect::<Result<Vec<_>>>()?;

    let contamination = contamination_matrix(&modes.as_array())?;
    let per_length = |source| {
        contamination
            .entry(Parameter::Length, source)
            .map(|v| v / path.length())
            .unwrap_or(f64::NAN)
    };
    let density_prefactor = per_length(Parameter::Density);
    let water_vapor_prefactor = per_length(Parameter::WaterVapor);

    let numeric = numeric_detection_mode(Parameter::Length, pulse, path, None)?;
    let length_mode_discrepancy = (0..=MAX_ORDER)
        .map(|n| (numeric.mode().coefficient(n) - modes.length.mode().coefficient(n)).norm())
        .fold(0.0, f64::max);

    let longer = ranging_modes(pulse, &path.with_length(10.0 * path.length())?)?;
    let k_longer = purify(&longer.length, &[&longer.density, &longer.water_vapor])?.k_const();
    let purified_length_dependence = (k_longer / purified.full.k_const() - 1.0).abs();

    let two = WavelengthSet::new(vec![1064e-9, 532e-9], vec![photons / 2.0; 2])?;
    let three = WavelengthSet::new(vec![1064e-9, 532e-9, 355e-9], vec![photons / 3.0; 3])?;
    let combination = multicolor::synth_3wi(1064e-9, 532e-9, 355e-9)?;

    Ok(SensitivityReport {
        photons,
        pulse,
        length_m: path.length(),
        time,
        ranging,
        contamination,
        density_prefactor,
        water_vapor_prefactor,
        length_mode_discrepancy,
        purified_length_dependence,
        baseline_2wi: multicolor::shot_noise_2wi(&two)?,
        baseline_3wi: multicolor::shot_noise_3wi(&three, &combination)?,
        purified,
    })
}

impl fmt::Display for SensitivityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "photons = {:e}", self.photons)?;
        writeln!(f, "wavelength_m = {:.6e}", self.pulse.wavelength())?;
        writeln!(f, "delta_omega_rad_per_s = {:.6e}", self.pulse.delta_omega())?;
        writeln!(f, "fwhm_duration_s = {:.6e}", self.pulse.fwhm_duration())?;
        writeln!(f, "length_m = {:.6e}", self.length_m)?;
        writeln!(f, "units: p_X dimensionless density-factor offset, p_Pw in Pa")?;
        writeln!(f, "x_prefactor_per_m = {:.6e}", self.density_prefactor)?;
        writeln!(f, "pw_prefactor_per_m_pa = {:.6e}", self.water_vapor_prefactor)?;
        writeln!(f, "delta_l_raw_m = {:.6e}", self.purified.delta_l_raw)?;
        writeln!(f, "delta_l_purified_m = {:.6e}", self.purified.delta_l_full)?;
        writeln!(f, "delta_l_x_only_m = {:.6e}", self.purified.delta_l_x_only)?;
        writeln!(f, "k_l_purified_gram_schmidt = {:.12e}", self.purified.full.k_const())?;
        writeln!(f, "k_l_purified_closed_form = {:.12e}", self.purified.k_full_closed_form)?;
        writeln!(f, "w_l_oracle_discrepancy = {:.3e}", self.length_mode_discrepancy)?;
        writeln!(f, "k_l_purified_length_dependence = {:.3e}", self.purified_length_dependence)?;
        writeln!(f, "baseline_2wi_m = {:.6e}", self.baseline_2wi)?;
        writeln!(f, "baseline_3wi_m = {:.6e}", self.baseline_3wi)?;
        writeln!(f)?;
        writeln!(f, "[modes]")?;
        writeln!(f, "{:<18} {:>14} {:>14}  unit", "mode", "K", "p_min")?;
        for row in self.time.iter().chain(&self.ranging) {
            writeln!(
                f,
                "{:<18} {:>14.6e} {:>14.6e}  {}",
                row.label, row.k_const, row.min_detectable, row.unit
            )?;
        }
        writeln!(f)?;
        writeln!(f, "[contamination]")?;
        write!(f, "{:<6}", "lo")?;
        for p in self.contamination.parameters() {
            write!(f, " {:>14}", p.symbol())?;
        }
        writeln!(f)?;
        for (p, row) in self.contamination.parameters().iter().zip(self.contamination.entries()) {
            write!(f, "{:<6}", format!("w_{}", p.symbol()))?;
            for v in row {
                write!(f, " {:>14.6e}", v)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
