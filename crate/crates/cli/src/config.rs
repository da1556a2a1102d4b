//! TOML run configuration. Every dimensioned key carries its unit suffix.
//!
//! ```toml
//! photons = 8e16
//!
//! [pulse]
//! wavelength_nm = 800.0
//! bandwidth_ratio = 0.16666666666666666   # Δω/ω₀
//!
//! [air]
//! temperature_c = 20.0
//! pressure_pa = 101325.0
//! co2_percent = 0.04
//! water_vapor_pa = 0.0
//!
//! [path]
//! length_m = 1.0
//!
//! [simulate]
//! lo = "purified"            # raw | purified | x-only
//! samples = 100000
//! seed = 0
//! length_offset_m = 0.0
//! length_std_m = 0.0
//! density_offset = 0.0
//! density_std = 1e-6
//! water_vapor_offset_pa = 0.0
//! water_vapor_std_pa = 10.0
//! ```

use serde::Deserialize;
use std::path::Path;

use comb_ranger::air::AirState;
use comb_ranger::dispersion::RangingPath;
use comb_ranger::mode_algebra::GaussianPulse;
use comb_ranger::simulator::{LoChoice, PerturbationSpec, SimConfig};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub photons: f64,
    pub pulse: PulseConfig,
    pub air: AirConfig,
    pub path: PathConfig,
    pub simulate: SimulateConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            photons: 8e16,
            pulse: PulseConfig::default(),
            air: AirConfig::default(),
            path: PathConfig::default(),
            simulate: SimulateConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PulseConfig {
    pub wavelength_nm: f64,
    pub bandwidth_ratio: f64,
}

impl Default for PulseConfig {
    fn default() -> Self {
        PulseConfig {
            wavelength_nm: 800.0,
            bandwidth_ratio: 1.0 / 6.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AirConfig {
    pub temperature_c: f64,
    pub pressure_pa: f64,
    pub co2_percent: f64,
    pub water_vapor_pa: f64,
}

impl Default for AirConfig {
    fn default() -> Self {
        AirConfig {
            temperature_c: 20.0,
            pressure_pa: 101_325.0,
            co2_percent: 0.04,
            water_vapor_pa: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PathConfig {
    pub length_m: f64,
}

impl Default for PathConfig {
    fn default() -> Self {
        PathConfig { length_m: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LoConfig {
    Raw,
    Purified,
    XOnly,
}

impl From<LoConfig> for LoChoice {
    fn from(lo: LoConfig) -> Self {
        match lo {
            LoConfig::Raw => LoChoice::Raw,
            LoConfig::Purified => LoChoice::Purified,
            LoConfig::XOnly => LoChoice::DensityOnlyPurified,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimulateConfig {
    pub lo: LoConfig,
    pub samples: usize,
    pub seed: u64,
    pub length_offset_m: f64,
    pub length_std_m: f64,
    pub density_offset: f64,
    pub density_std: f64,
    pub water_vapor_offset_pa: f64,
    pub water_vapor_std_pa: f64,
}

impl Default for SimulateConfig {
    fn default() -> Self {
        SimulateConfig {
            lo: LoConfig::Purified,
            samples: 100_000,
            seed: 0,
            length_offset_m: 0.0,
            length_std_m: 0.0,
            density_offset: 0.0,
            density_std: 1e-6,
            water_vapor_offset_pa: 0.0,
            water_vapor_std_pa: 10.0,
        }
    }
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        match path {
            None => Ok(RunConfig::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| {
                    CliError::Validation(format!("cannot read config {}: {e}", p.display()))
                })?;
                RunConfig::parse(&text)
            }
        }
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Validation(format!("config: {e}")))
    }

    pub fn pulse(&self) -> Result<GaussianPulse, CliError> {
        Ok(GaussianPulse::from_wavelength(
            self.pulse.wavelength_nm * 1e-9,
            self.pulse.bandwidth_ratio,
        )?)
    }

    pub fn air_state(&self) -> Result<AirState, CliError> {
        Ok(AirState::new(
            self.air.temperature_c,
            self.air.pressure_pa,
            self.air.co2_percent,
            self.air.water_vapor_pa,
        )?)
    }

    pub fn path(&self) -> Result<RangingPath, CliError> {
        Ok(RangingPath::new(self.air_state()?, self.path.length_m)?)
    }

    pub fn sim_config(&self) -> Result<SimConfig, CliError> {
        let s = &self.simulate;
        Ok(SimConfig {
            pulse: self.pulse()?,
            path: self.path()?,
            photons: self.photons,
            lo: s.lo.into(),
            length: PerturbationSpec {
                fixed: s.length_offset_m,
                std_dev: s.length_std_m,
            },
            density: PerturbationSpec {
                fixed: s.density_offset,
                std_dev: s.density_std,
            },
            water_vapor: PerturbationSpec {
                fixed: s.water_vapor_offset_pa,
                std_dev: s.water_vapor_std_pa,
            },
            samples: s.samples,
            seed: s.seed,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_gives_defaults() {
        assert_eq!(RunConfig::parse("").unwrap(), RunConfig::default());
    }

    #[test]
    fn unknown_and_unsuffixed_keys_are_rejected() {
        assert!(RunConfig::parse("[pulse]\nwavelength = 800.0\n").is_err());
        assert!(RunConfig::parse("colour = 1\n").is_err());
    }

    #[test]
    fn partial_sections_merge_with_defaults() {
        let c = RunConfig::parse("[air]\nwater_vapor_pa = 500.0\n[simulate]\nlo = \"x-only\"\n").unwrap();
        assert_eq!(c.air.water_vapor_pa, 500.0);
        assert_eq!(c.air.pressure_pa, 101_325.0);
        assert_eq!(c.simulate.lo, LoConfig::XOnly);
    }
}
