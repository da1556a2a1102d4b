use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use num_complex::Complex64;

use comb_ranger::air::{self, AirState, Wavenumber};
use comb_ranger::detection::{
    contamination_report, purify, ranging_modes, time_detection_modes, DetectionMode,
};
use comb_ranger::mode_algebra::{gaussian_mode, hermite_gauss, SpectralGrid, SpectralMode, MAX_ORDER};
use comb_ranger::multicolor::{write_comparison_csv, ComparisonRow, WavelengthSet};
use comb_ranger::simulator;

use crate::config::RunConfig;
use crate::CliError;

const HBAR: f64 = 1.054_571_817e-34;

pub fn air_index(
    out: &mut impl Write,
    wavelength_nm: f64,
    temperature_c: f64,
    pressure_pa: f64,
    co2_percent: f64,
    water_vapor_pa: f64,
) -> Result<(), CliError> {
    let state = AirState::new(temperature_c, pressure_pa, co2_percent, water_vapor_pa)?;
    let sigma = Wavenumber::from_wavelength(wavelength_nm * 1e-9)?;
    let n_phase = air::phase_index(sigma, &state)?;
    let n_group = air::group_index(sigma, &state)?;
    let s = air::dispersion_scalars(sigma.angular_frequency())?;
    writeln!(out, "wavelength_nm = {wavelength_nm}")?;
    writeln!(out, "sigma_per_um = {:.9}", sigma.per_um())?;
    writeln!(out, "n_phase = {:.15}", n_phase)?;
    writeln!(out, "n_phase_minus_1 = {:.9e}", air::refractivity(sigma, &state)?)?;
    writeln!(out, "n_group = {:.15}", n_group)?;
    writeln!(out, "n_group_minus_1 = {:.9e}", air::group_refractivity(sigma, &state)?)?;
    writeln!(out, "K = {:.9e}", air::k_dispersion(sigma)?)?;
    writeln!(out, "g_per_pa = {:.9e}", air::water_term(sigma))?;
    writeln!(out, "X = {:.9e}", air::density_factor(&state))?;
    writeln!(out, "delta1 = {:.9e}", s.delta1)?;
    writeln!(out, "delta2 = {:.9e}", s.delta2)?;
    writeln!(out, "eta1 = {:.9e}", s.eta1)?;
    writeln!(out, "eta2 = {:.9e}", s.eta2)?;
    Ok(())
}

fn coefficient_row(out: &mut impl Write, m: &DetectionMode) -> Result<(), CliError> {
    write!(out, "{},{:.9e},{}", m.label(), m.k_const(), m.label().parameter().unit())?;
    for n in 0..=MAX_ORDER {
        write!(out, ",{:.12e}", m.mode().coefficient(n).re)?;
    }
    writeln!(out)?;
    Ok(())
}

/// Real profile `√Δω·Re[e^{-iθ} f]`, with `θ` the phase at the largest sample.
fn real_profile(mode: &SpectralMode, grid: &SpectralGrid) -> Result<Vec<f64>, CliError> {
    let sampled = mode.sample(grid)?;
    let values = sampled.values();
    let peak = values
        .iter()
        .copied()
        .max_by(|a, b| a.norm_sqr().total_cmp(&b.norm_sqr()))
        .unwrap_or(Complex64::new(1.0, 0.0));
    let rot = Complex64::from_polar(1.0, -peak.arg());
    let scale = grid.pulse().delta_omega().sqrt();
    Ok(values.iter().map(|v| scale * (rot * v).re).collect())
}

pub fn modes(out: &mut impl Write, cfg: &RunConfig, profiles: Option<&Path>) -> Result<(), CliError> {
    let pulse = cfg.pulse()?;
    let path = cfg.path()?;
    let t = time_detection_modes(pulse);
    let r = ranging_modes(pulse, &path)?;
    let l_p = purify(&r.length, &[&r.density, &r.water_vapor])?;
    let l_x = purify(&r.length, &[&r.density])?;
    let phi_p = purify(&t.phi, &[&t.group, &t.gvd])?;
    let gvd_p = purify(&t.gvd, &[&t.phi, &t.group])?;

    write!(out, "mode,k_const,parameter_unit")?;
    for n in 0..=MAX_ORDER {
        write!(out, ",v{n}")?;
    }
    writeln!(out)?;
    for m in [&t.phi, &t.group, &t.gvd, &phi_p, &gvd_p, &r.length, &r.density, &r.water_vapor, &l_p, &l_x] {
        coefficient_row(out, m)?;
    }

    if let Some(file) = profiles {
        let grid = SpectralGrid::standard(pulse);
        let columns = [
            real_profile(&gaussian_mode(pulse), &grid)?,
            real_profile(&hermite_gauss(0, pulse)?, &grid)?,
            real_profile(&hermite_gauss(1, pulse)?, &grid)?,
            real_profile(&hermite_gauss(2, pulse)?, &grid)?,
            real_profile(r.length.mode(), &grid)?,
            real_profile(l_p.mode(), &grid)?,
            real_profile(r.density.mode(), &grid)?,
            real_profile(r.water_vapor.mode(), &grid)?,
        ];
        let mut w = BufWriter::new(File::create(file)?);
        writeln!(w, "x,u,v0,v1,v2,w_L,w_L_p,w_X,w_Pw")?;
        for (i, omega) in grid.omegas().enumerate() {
            write!(w, "{:.9}", pulse.normalized_detuning(omega))?;
            for c in &columns {
                write!(w, ",{:.12e}", c[i])?;
            }
            writeln!(w)?;
        }
        w.flush()?;
    }
    Ok(())
}

pub fn sensitivity(out: &mut impl Write, cfg: &RunConfig) -> Result<(), CliError> {
    let pulse = cfg.pulse()?;
    let report = contamination_report(pulse, &cfg.path()?, cfg.photons)?;
    write!(out, "{report}")?;
    writeln!(out, "\n[presentation]")?;
    writeln!(
        out,
        "optical_power_w_for_1s = {:.6e}",
        cfg.photons * HBAR * pulse.omega0()
    )?;
    Ok(())
}

pub fn multicolor(out: &mut impl Write, cfg: &RunConfig, sets: &[Vec<f64>]) -> Result<(), CliError> {
    let state = cfg.air_state()?;
    let rows = sets
        .iter()
        .map(|nm| {
            let ws = WavelengthSet::uniform(nm.iter().map(|l| l * 1e-9).collect(), cfg.photons)?;
            ComparisonRow::compute(&ws, &state, cfg.path.length_m)
        })
        .collect::<Result<Vec<_>, _>>()?;
    write_comparison_csv(out, &rows)?;
    Ok(())
}

pub fn simulate(out: &mut impl Write, cfg: &RunConfig, samples_csv: Option<&Path>) -> Result<(), CliError> {
    let config = cfg.sim_config()?;
    let (result, samples) = simulator::run_with_samples(&config)?;
    write!(out, "{result}")?;
    if let Some(file) = samples_csv {
        let mut w = BufWriter::new(File::create(file)?);
        simulator::write_samples_csv(&mut w, &samples)?;
        w.flush()?;
    }
    Ok(())
}
