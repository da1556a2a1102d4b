//! Seeded Monte Carlo of a single-shot homodyne length measurement.
//!
//! Each sample draws the environment offsets, builds the first-order field,
//! projects it on the chosen local oscillator and adds Gaussian shot noise
//! at `1/(2√N K_lo)`. Sample `i` uses its own ChaCha8 stream `i` of the
//! configured seed, so parallel and serial runs are bit-identical.

mod stats;

pub use stats::{ols, Regression, Slope, Summary};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use std::fmt;
use std::io::{self, Write};

use crate::detection::{
    homodyne_signal, min_detectable, purify, ranging_modes, DetectionMode, Parameter,
    RangingModes,
};
use crate::dispersion::{assemble, RangingPath, RangingPerturbation};
use crate::error::{Error, Result};
use crate::mode_algebra::GaussianPulse;

/// Local-oscillator shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LoChoice {
    /// `w_L`
    Raw,
    /// `w_L` purified against `w_X` and `w_Pw`
    Purified,
    /// `w_L` purified against `w_X` only
    DensityOnlyPurified,
}

impl LoChoice {
    pub fn build(self, modes: &RangingModes) -> Result<DetectionMode> {
        match self {
            LoChoice::Raw => Ok(modes.length.clone()),
            LoChoice::Purified => purify(&modes.length, &[&modes.density, &modes.water_vapor]),
            LoChoice::DensityOnlyPurified => purify(&modes.length, &[&modes.density]),
        }
    }
}

/// Parameter offset `fixed + std_dev·z`, `z ~ N(0, 1)` drawn per sample.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PerturbationSpec {
    pub fixed: f64,
    pub std_dev: f64,
}

impl PerturbationSpec {
    pub fn fixed(value: f64) -> Self {
        PerturbationSpec {
            fixed: value,
            std_dev: 0.0,
        }
    }

    pub fn fluctuating(std_dev: f64) -> Self {
        PerturbationSpec {
            fixed: 0.0,
            std_dev,
        }
    }

    fn draw(&self, z: f64) -> f64 {
        self.fixed + self.std_dev * z
    }

    /// `|fixed| + σ`, the typical magnitude checked against the linearity guard.
    fn envelope(&self) -> f64 {
        self.fixed.abs() + self.std_dev
    }

    fn validate(&self, field: &'static str) -> Result<()> {
        if !self.fixed.is_finite() || !self.std_dev.is_finite() || self.std_dev < 0.0 {
            return Err(Error::invalid(
                field,
                format!(
                    "fixed {} and std_dev {} must be finite with std_dev >= 0",
                    self.fixed, self.std_dev
                ),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub pulse: GaussianPulse,
    pub path: RangingPath,
    pub photons: f64,
    pub lo: LoChoice,
    pub length: PerturbationSpec,
    pub density: PerturbationSpec,
    pub water_vapor: PerturbationSpec,
    pub samples: usize,
    pub seed: u64,
}

impl SimConfig {
    /// No perturbations, raw `w_L`, 10⁵ samples.
    pub fn new(pulse: GaussianPulse, path: RangingPath, photons: f64, seed: u64) -> Self {
        SimConfig {
            pulse,
            path,
            photons,
            lo: LoChoice::Raw,
            length: PerturbationSpec::default(),
            density: PerturbationSpec::default(),
            water_vapor: PerturbationSpec::default(),
            samples: 100_000,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::invalid("samples", "must be at least 1"));
        }
        if !self.photons.is_finite() || self.photons < 1.0 {
            return Err(Error::invalid(
                "photons",
                format!("{} must be at least 1", self.photons),
            ));
        }
        self.length.validate("length")?;
        self.density.validate("density")?;
        self.water_vapor.validate("water_vapor")?;
        RangingPerturbation {
            p_length: self.length.envelope(),
            p_density: self.density.envelope(),
            p_water_vapor: self.water_vapor.envelope(),
        }
        .check_linear(&self.pulse, &self.path)
    }

    fn fluctuates(&self) -> bool {
        self.density.std_dev > 0.0 || self.water_vapor.std_dev > 0.0
    }
}

/// One simulated measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub index: usize,
    pub p_length: f64,
    pub p_density: f64,
    pub p_water_vapor: f64,
    /// Length estimate, metres.
    pub signal: f64,
}

pub const SAMPLE_HEADER: &str = "index,p_length_m,p_density,p_water_vapor_pa,signal_m";

pub fn write_samples_csv<W: Write>(out: &mut W, samples: &[Sample]) -> io::Result<()> {
    writeln!(out, "{SAMPLE_HEADER}")?;
    for s in samples {
        writeln!(
            out,
            "{},{:.17e},{:.17e},{:.17e},{:.17e}",
            s.index, s.p_length, s.p_density, s.p_water_vapor, s.signal
        )?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub lo_label: String,
    pub samples: usize,
    pub seed: u64,
    pub photons: f64,
    pub k_lo: f64,
    /// `1/(2√N K_lo)`, metres.
    pub predicted_sigma: f64,
    /// Statistics of the length estimate.
    pub signal: Summary,
    /// Statistics of the estimate minus the analytic signal model
    /// `Σⱼ (Kⱼ/K_lo)⟨w_lo, wⱼ⟩ pⱼ`; its spread is the shot noise.
    pub residual: Summary,
    /// Statistics of the estimate minus the injected `p_L`.
    pub bias: Summary,
    pub predicted_bias: f64,
    /// `(Kⱼ/K_lo)⟨w_lo, wⱼ⟩` for X and `P_w`.
    pub predicted_leakage: [f64; 2],
    pub regression: Option<Regression>,
}

impl SimResult {
    /// All environmental slopes within 3 standard errors of zero; `None`
    /// when no environmental parameter fluctuated.
    pub fn immune(&self) -> Option<bool> {
        let r = self.regression.as_ref()?;
        let env: Vec<&Slope> = r
            .slopes
            .iter()
            .filter(|s| s.parameter != Parameter::Length)
            .collect();
        if env.is_empty() {
            return None;
        }
        Some(env.iter().all(|s| s.t_statistic().abs() < 3.0))
    }
}

impl fmt::Display for SimResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "lo = {}", self.lo_label)?;
        writeln!(f, "samples = {}", self.samples)?;
        writeln!(f, "seed = {}", self.seed)?;
        writeln!(f, "photons = {:e}", self.photons)?;
        writeln!(f, "k_lo_per_m = {:.9e}", self.k_lo)?;
        writeln!(f, "predicted_sigma_m = {:.9e}", self.predicted_sigma)?;
        writeln!(
            f,
            "mean_m = {:.9e} +/- {:.3e}",
            self.signal.mean, self.signal.mean_std_error
        )?;
        writeln!(
            f,
            "std_dev_m = {:.9e} +/- {:.3e}",
            self.signal.std_dev, self.signal.std_dev_std_error
        )?;
        writeln!(
            f,
            "residual_std_m = {:.9e} +/- {:.3e}",
            self.residual.std_dev, self.residual.std_dev_std_error
        )?;
        writeln!(
            f,
            "bias_m = {:.9e} +/- {:.3e}",
            self.bias.mean, self.bias.mean_std_error
        )?;
        writeln!(f, "predicted_bias_m = {:.9e}", self.predicted_bias)?;
        writeln!(f, "predicted_slope_X_m = {:.9e}", self.predicted_leakage[0])?;
        writeln!(f, "predicted_slope_Pw_m_per_pa = {:.9e}", self.predicted_leakage[1])?;
        match &self.regression {
            Some(r) => {
                for s in &r.slopes {
                    writeln!(
                        f,
                        "slope_{} = {:.9e} +/- {:.3e} (t = {:.3})",
                        s.parameter.symbol(),
                        s.value,
                        s.std_error,
                        s.t_statistic()
                    )?;
                }
            }
            None => writeln!(f, "slopes = not-applicable")?,
        }
        match self.immune() {
            Some(v) => writeln!(f, "immune: {v}"),
            None => writeln!(f, "immune: not-applicable"),
        }
    }
}

fn draw_sample(
    config: &SimConfig,
    modes: &RangingModes,
    lo: &DetectionMode,
    noise_sigma: f64,
    index: usize,
) -> Result<Sample> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(index as u64);
    let mut z = [0.0f64; 4];
    for v in &mut z {
        *v = StandardNormal.sample(&mut rng);
    }
    let p_length = config.length.draw(z[0]);
    let p_density = config.density.draw(z[1]);
    let p_water_vapor = config.water_vapor.draw(z[2]);
    let field = assemble(
        config.pulse,
        &[
            (p_length, &modes.length),
            (p_density, &modes.density),
            (p_water_vapor, &modes.water_vapor),
        ],
    )?;
    let signal = homodyne_signal(&field, lo)? + noise_sigma * z[3];
    Ok(Sample {
        index,
        p_length,
        p_density,
        p_water_vapor,
        signal,
    })
}

/// Runs the simulation and also returns the raw samples in index order.
pub fn run_with_samples(config: &SimConfig) -> Result<(SimResult, Vec<Sample>)> {
    config.validate()?;
    let modes = ranging_modes(config.pulse, &config.path)?;
    let lo = config.lo.build(&modes)?;
    let noise_sigma = min_detectable(lo.k_const(), config.photons)?;

    let samples = (0..config.samples)
        .into_par_iter()
        .map(|i| draw_sample(config, &modes, &lo, noise_sigma, i))
        .collect::<Result<Vec<Sample>>>()?;

    let leak = |m: &DetectionMode| -> Result<f64> { Ok(m.k_const() / lo.k_const() * lo.overlap(m)?) };
    let gain = [leak(&modes.length)?, leak(&modes.density)?, leak(&modes.water_vapor)?];

    let signals: Vec<f64> = samples.iter().map(|s| s.signal).collect();
    let residuals: Vec<f64> = samples
        .iter()
        .map(|s| s.signal - gain[0] * s.p_length - gain[1] * s.p_density - gain[2] * s.p_water_vapor)
        .collect();
    let bias: Vec<f64> = samples.iter().map(|s| s.signal - s.p_length).collect();

    let p_length: Vec<f64> = samples.iter().map(|s| s.p_length).collect();
    let p_density: Vec<f64> = samples.iter().map(|s| s.p_density).collect();
    let p_water: Vec<f64> = samples.iter().map(|s| s.p_water_vapor).collect();
    let regression = if config.fluctuates() {
        Some(ols(
            &signals,
            &[
                (Parameter::Length, &p_length),
                (Parameter::Density, &p_density),
                (Parameter::WaterVapor, &p_water),
            ],
        )?)
    } else {
        None
    };

    let result = SimResult {
        lo_label: lo.label().to_string(),
        samples: config.samples,
        seed: config.seed,
        photons: config.photons,
        k_lo: lo.k_const(),
        predicted_sigma: noise_sigma,
        signal: Summary::of(&signals),
        residual: Summary::of(&residuals),
        bias: Summary::of(&bias),
        predicted_bias: (gain[0] - 1.0) * config.length.fixed
            + gain[1] * config.density.fixed
            + gain[2] * config.water_vapor.fixed,
        predicted_leakage: [gain[1], gain[2]],
        regression,
    };
    Ok((result, samples))
}

pub fn run(config: &SimConfig) -> Result<SimResult> {
    run_with_samples(config).map(|(r, _)| r)
}

/// As [`run`], but requires fluctuating X or `P_w` so leakage slopes exist.
pub fn immunity_report(config: &SimConfig) -> Result<SimResult> {
    if !config.fluctuates() {
        return Err(Error::RegressionNotApplicable(
            "immunity needs fluctuating density or water vapour".into(),
        ));
    }
    run(config)
}
