use comb_ranger::air::AirState;
use comb_ranger::detection::{contamination_matrix, ranging_modes, Parameter};
use comb_ranger::dispersion::RangingPath;
use comb_ranger::mode_algebra::GaussianPulse;
use comb_ranger::simulator::{self, LoChoice, PerturbationSpec, SimConfig};
use comb_ranger::Error;

fn base(samples: usize, seed: u64) -> SimConfig {
    let pulse = GaussianPulse::from_wavelength(800e-9, 1.0 / 6.0).unwrap();
    let path = RangingPath::new(AirState::standard_dry(), 1.0).unwrap();
    SimConfig {
        samples,
        ..SimConfig::new(pulse, path, 8e16, seed)
    }
}

#[test]
fn quiet_run_matches_shot_noise() {
    let r = simulator::run(&base(100_000, 1)).unwrap();
    assert!((r.predicted_sigma - 2.22e-16).abs() < 0.01e-16);
    assert!((r.signal.std_dev - r.predicted_sigma).abs() < 3.0 * r.signal.std_dev_std_error);
    assert!(r.signal.mean.abs() < 3.0 * r.signal.mean_std_error);
}

#[test]
fn quadrupling_photons_halves_spread() {
    let a = simulator::run(&base(50_000, 2)).unwrap();
    let b = simulator::run(&SimConfig {
        photons: 3.2e17,
        ..base(50_000, 2)
    })
    .unwrap();
    let ratio = a.signal.std_dev / b.signal.std_dev;
    let se = ratio
        * ((a.signal.std_dev_std_error / a.signal.std_dev).powi(2)
            + (b.signal.std_dev_std_error / b.signal.std_dev).powi(2))
        .sqrt();
    assert!((ratio - 2.0).abs() < 3.0 * se, "{ratio} +/- {se}");
}

#[test]
fn calibration_over_independent_runs() {
    let runs: Vec<_> = (0..20)
        .map(|seed| simulator::run(&base(2_000, 100 + seed)).unwrap())
        .collect();
    let covered = runs
        .iter()
        .filter(|r| r.signal.mean.abs() < 3.0 * r.signal.mean_std_error)
        .count();
    assert!(covered >= 19, "{covered} of 20");
    // Σ (n-1)s²/σ² ~ χ² with 20·1999 degrees of freedom
    let dof = 20.0 * 1999.0;
    let chi2: f64 = runs
        .iter()
        .map(|r| 1999.0 * (r.signal.std_dev / r.predicted_sigma).powi(2))
        .sum();
    assert!((chi2 - dof).abs() < 4.0 * (2.0 * dof).sqrt(), "{chi2}");
}

#[test]
fn every_lo_is_unbiased_for_length() {
    for lo in [LoChoice::Raw, LoChoice::Purified, LoChoice::DensityOnlyPurified] {
        let r = simulator::run(&SimConfig {
            lo,
            length: PerturbationSpec::fixed(5e-12),
            ..base(20_000, 3)
        })
        .unwrap();
        assert!(
            r.bias.mean.abs() < 3.0 * r.bias.mean_std_error,
            "{lo:?}: {} +/- {}",
            r.bias.mean,
            r.bias.mean_std_error
        );
    }
}

#[test]
fn density_step_shifts_raw_but_not_purified() {
    let step = 1e-6;
    let raw = simulator::run(&SimConfig {
        density: PerturbationSpec::fixed(step),
        ..base(20_000, 4)
    })
    .unwrap();
    let expected = 2.671e-4 * step;
    assert!((raw.bias.mean - raw.predicted_bias).abs() < 3.0 * raw.bias.mean_std_error);
    assert!((raw.predicted_bias - expected).abs() < 1e-3 * expected);

    let purified = simulator::run(&SimConfig {
        lo: LoChoice::Purified,
        density: PerturbationSpec::fixed(step),
        ..base(20_000, 4)
    })
    .unwrap();
    assert!(purified.bias.mean.abs() < 3.0 * purified.bias.mean_std_error);
    assert!(purified.predicted_bias.abs() < 1e-9 * expected);
}

#[test]
fn raw_slopes_follow_contamination_matrix() {
    let config = SimConfig {
        density: PerturbationSpec::fluctuating(1e-6),
        water_vapor: PerturbationSpec::fluctuating(10.0),
        ..base(100_000, 5)
    };
    let r = simulator::immunity_report(&config).unwrap();
    assert_eq!(r.immune(), Some(false));
    let m = ranging_modes(config.pulse, &config.path).unwrap();
    let mx = contamination_matrix(&m.as_array()).unwrap();
    let reg = r.regression.as_ref().unwrap();
    for p in [Parameter::Density, Parameter::WaterVapor] {
        let s = reg.slope(p).unwrap();
        let expected = mx.entry(Parameter::Length, p).unwrap();
        assert!((s.value - expected).abs() < 3.0 * s.std_error, "{p}");
    }
    let pw = reg.slope(Parameter::WaterVapor).unwrap().value;
    assert!((pw + 3.7e-10).abs() < 0.05 * 3.7e-10);
}

#[test]
fn purified_lo_is_immune() {
    let r = simulator::immunity_report(&SimConfig {
        lo: LoChoice::Purified,
        density: PerturbationSpec::fluctuating(1e-6),
        water_vapor: PerturbationSpec::fluctuating(10.0),
        ..base(100_000, 6)
    })
    .unwrap();
    assert_eq!(r.immune(), Some(true));
    assert!(r.to_string().contains("immune: true"));
    assert!((r.residual.std_dev - r.predicted_sigma).abs() < 3.0 * r.residual.std_dev_std_error);
}

#[test]
fn reruns_are_bit_identical() {
    let config = SimConfig {
        lo: LoChoice::DensityOnlyPurified,
        water_vapor: PerturbationSpec::fluctuating(5.0),
        ..base(5_000, 7)
    };
    let a = simulator::run_with_samples(&config).unwrap();
    let b = simulator::run_with_samples(&config).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.0.to_string(), b.0.to_string());
    let other = simulator::run(&SimConfig { seed: 8, ..config }).unwrap();
    assert_ne!(other.signal.mean, a.0.signal.mean);
}

#[test]
fn zero_fluctuation_regression_is_not_applicable() {
    assert!(matches!(
        simulator::immunity_report(&base(1_000, 9)),
        Err(Error::RegressionNotApplicable(_))
    ));
}
