use approx::assert_relative_eq;
use num_complex::Complex64;
use proptest::prelude::*;

use comb_ranger::air::{self, AirState, Wavenumber};
use comb_ranger::detection::{
    contamination_matrix, homodyne_signal, min_detectable, purify, ranging_modes,
    time_detection_modes, DetectionMode, ModeLabel, Parameter,
};
use comb_ranger::dispersion::{
    linearized_ranging_field, linearized_time_field, RangingPath, RangingPerturbation,
    TimePerturbation,
};
use comb_ranger::mode_algebra::{
    gram_schmidt, inner_product, quadrature_inner_product, GaussianPulse, SpectralGrid,
    SpectralMode, MAX_ORDER,
};
use comb_ranger::multicolor::{self, WavelengthSet};

fn pulse() -> GaussianPulse {
    GaussianPulse::from_wavelength(800e-9, 1.0 / 6.0).unwrap()
}

fn coefficients(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, len)
}

fn complex_coefficients() -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..=MAX_ORDER + 1)
        .prop_map(|v| v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect())
}

fn air_state() -> impl Strategy<Value = AirState> {
    (0.0f64..40.0, 80_000.0f64..110_000.0, 0.03f64..0.06, 0.0f64..3000.0)
        .prop_map(|(t, p, x, w)| AirState::new(t, p, x, w).unwrap())
}

fn dry_state() -> impl Strategy<Value = AirState> {
    (-20.0f64..60.0, 50_000.0f64..120_000.0, 0.0f64..0.1)
        .prop_map(|(t, p, x)| AirState::new(t, p, x, 0.0).unwrap())
}

proptest! {
    #[test]
    fn inner_product_is_hermitian(a in complex_coefficients(), b in complex_coefficients()) {
        let p = pulse();
        let f = SpectralMode::from_coefficients(p, a).unwrap();
        let g = SpectralMode::from_coefficients(p, b).unwrap();
        let fg = inner_product(&f, &g).unwrap();
        let gf = inner_product(&g, &f).unwrap();
        prop_assert!((fg - gf.conj()).norm() < 1e-14);
        prop_assert!((inner_product(&f, &f).unwrap().re - f.norm_sqr()).abs() < 1e-14);
    }

    #[test]
    fn quadrature_matches_coefficient_inner_product(
        a in complex_coefficients(),
        b in complex_coefficients(),
    ) {
        let p = pulse();
        let grid = SpectralGrid::standard(p);
        let f = SpectralMode::from_coefficients(p, a).unwrap();
        let g = SpectralMode::from_coefficients(p, b).unwrap();
        let exact = inner_product(&f, &g).unwrap();
        let quad = quadrature_inner_product(&f.sample(&grid).unwrap(), &g.sample(&grid).unwrap())
            .unwrap();
        prop_assert!((exact - quad).norm() < 1e-6 * (1.0 + f.norm() * g.norm()));
    }

    #[test]
    fn gram_schmidt_is_orthonormal(
        a in coefficients(5), b in coefficients(5), c in coefficients(5),
    ) {
        let p = pulse();
        let modes: Vec<SpectralMode> = [a, b, c]
            .iter()
            .map(|v| SpectralMode::from_real(p, v).unwrap())
            .collect();
        if let Ok(q) = gram_schmidt(&modes) {
            for i in 0..q.len() {
                for j in 0..q.len() {
                    let ip = inner_product(&q[i], &q[j]).unwrap();
                    let expected = if i == j { 1.0 } else { 0.0 };
                    prop_assert!((ip - Complex64::new(expected, 0.0)).norm() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn purified_mode_is_orthogonal_and_costs_sensitivity(
        t in coefficients(4), a in coefficients(4), b in coefficients(4), k in 0.1f64..10.0,
    ) {
        let p = pulse();
        let build = |v: &[f64], param| {
            let m = SpectralMode::from_real(p, v).unwrap().normalized()?;
            DetectionMode::new(ModeLabel::Detection(param), m, k)
        };
        let (Ok(target), Ok(x), Ok(w)) = (
            build(&t, Parameter::Length),
            build(&a, Parameter::Density),
            build(&b, Parameter::WaterVapor),
        ) else {
            return Ok(());
        };
        if let Ok(wp) = purify(&target, &[&x, &w]) {
            prop_assert!(wp.overlap(&x).unwrap().abs() < 1e-10);
            prop_assert!(wp.overlap(&w).unwrap().abs() < 1e-10);
            prop_assert!(wp.k_const() <= target.k_const() * (1.0 + 1e-12));
            prop_assert!((wp.mode().norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn refractivity_is_linear_in_water_vapour(
        t in 0.0f64..40.0, pw in 1.0f64..2000.0, lambda in 400e-9f64..1600e-9,
    ) {
        let sigma = Wavenumber::from_wavelength(lambda).unwrap();
        let dry = AirState::new(t, 100_000.0, 0.04, 0.0).unwrap();
        let n0 = air::refractivity(sigma, &dry).unwrap();
        let n1 = air::refractivity(sigma, &dry.with_water_vapor(pw).unwrap()).unwrap();
        let n2 = air::refractivity(sigma, &dry.with_water_vapor(2.0 * pw).unwrap()).unwrap();
        let d1 = n1 - n0;
        let d2 = n2 - n0;
        prop_assert!((d2 - 2.0 * d1).abs() < 1e-6 * d1.abs());
    }

    #[test]
    fn k_increases_with_wavenumber(s in 0.1f64..6.0, ds in 1e-3f64..0.2) {
        let a = air::k_dispersion(Wavenumber::new(s).unwrap()).unwrap();
        let b = air::k_dispersion(Wavenumber::new(s + ds).unwrap()).unwrap();
        prop_assert!(b > a);
    }

    #[test]
    fn two_colour_reconstructs_dry_length(state in dry_state(), length in 0.1f64..1000.0) {
        let ws = WavelengthSet::uniform(vec![1064e-9, 532e-9], 8e16).unwrap();
        let lengths = multicolor::phase_lengths(&ws, &state, length).unwrap();
        let alpha = multicolor::alpha_2wi(1064e-9, 532e-9).unwrap();
        let estimate = lengths[0] + alpha * (lengths[0] - lengths[1]);
        prop_assert!(((estimate - length) / length).abs() < 1e-12);
        let bias = multicolor::humidity_systematic_2wi(&ws, &state, length).unwrap();
        prop_assert!(bias.abs() < 1e-15 * length);
    }

    #[test]
    fn three_colour_reconstructs_moist_length(state in air_state(), length in 0.1f64..1000.0) {
        let ws = WavelengthSet::uniform(vec![1064e-9, 532e-9, 355e-9], 8e16).unwrap();
        let c = multicolor::synth_3wi(1064e-9, 532e-9, 355e-9).unwrap();
        let lengths = multicolor::phase_lengths(&ws, &state, length).unwrap();
        let estimate = c.combine(&lengths).unwrap();
        prop_assert!((estimate - length).abs() < 1e-10 * length);
    }

    #[test]
    fn contamination_matrix_ignores_air_state(a in air_state(), b in air_state()) {
        let p = pulse();
        let ma = ranging_modes(p, &RangingPath::new(a, 2.0).unwrap()).unwrap();
        let mb = ranging_modes(p, &RangingPath::new(b, 2.0).unwrap()).unwrap();
        let xa = contamination_matrix(&ma.as_array()).unwrap();
        let xb = contamination_matrix(&mb.as_array()).unwrap();
        prop_assert_eq!(xa, xb);
    }

    #[test]
    fn shot_noise_scales_with_photons(k in 1e-3f64..1e16, n in 1.0f64..1e20) {
        let a = min_detectable(k, n).unwrap();
        let b = min_detectable(k, 4.0 * n).unwrap();
        prop_assert!((a / b - 2.0).abs() < 1e-12);
    }

    #[test]
    fn time_signals_are_linear(
        p_phi in -1.0f64..1.0, p_g in -1.0f64..1.0, p_gvd in -1.0f64..1.0,
    ) {
        let pulse = pulse();
        let modes = time_detection_modes(pulse);
        let unit = TimePerturbation { p_phi: p_phi * 1e-21, p_g: p_g * 1e-20, p_gvd: p_gvd * 1e-20 };
        for lo in [&modes.phi, &modes.group, &modes.gvd] {
            let signals: Vec<f64> = [1.0, 2.0, 3.0]
                .iter()
                .map(|&s| {
                    let pert = TimePerturbation {
                        p_phi: s * unit.p_phi,
                        p_g: s * unit.p_g,
                        p_gvd: s * unit.p_gvd,
                    };
                    homodyne_signal(&linearized_time_field(pulse, &pert).unwrap(), lo).unwrap()
                })
                .collect();
            let scale = signals.iter().map(|v| v.abs()).fold(0.0, f64::max);
            if scale > 0.0 {
                prop_assert!((signals[1] - 2.0 * signals[0]).abs() <= 1e-3 * scale);
                prop_assert!((signals[2] - 3.0 * signals[0]).abs() <= 1e-3 * scale);
            }
        }
    }
}

#[test]
fn ranging_signals_are_linear() {
    let p = pulse();
    let path = RangingPath::new(AirState::standard_dry(), 1.0).unwrap();
    let modes = ranging_modes(p, &path).unwrap();
    let units = [
        RangingPerturbation { p_length: 1e-10, ..Default::default() },
        RangingPerturbation { p_density: 1e-7, ..Default::default() },
        RangingPerturbation { p_water_vapor: 1.0, ..Default::default() },
    ];
    for unit in units {
        for lo in modes.as_array() {
            let signals: Vec<f64> = [1.0, 2.0, 3.0]
                .iter()
                .map(|&s| {
                    let pert = RangingPerturbation {
                        p_length: s * unit.p_length,
                        p_density: s * unit.p_density,
                        p_water_vapor: s * unit.p_water_vapor,
                    };
                    let f = linearized_ranging_field(p, &path, &pert).unwrap();
                    homodyne_signal(&f, lo).unwrap()
                })
                .collect();
            assert_relative_eq!(signals[1], 2.0 * signals[0], max_relative = 1e-3);
            assert_relative_eq!(signals[2], 3.0 * signals[0], max_relative = 1e-3);
        }
    }
}

#[test]
fn shot_noise_degrades_towards_degenerate_pair() {
    let mut previous = 0.0;
    for second in [532e-9, 800e-9, 1000e-9, 1050e-9, 1060e-9, 1063e-9] {
        let ws = WavelengthSet::new(vec![1064e-9, second], vec![4e16; 2]).unwrap();
        let d = multicolor::shot_noise_2wi(&ws).unwrap();
        assert!(d > previous, "{second}: {d} <= {previous}");
        previous = d;
    }
    let ws = WavelengthSet::new(vec![1064e-9, 532e-9], vec![4e16; 2]).unwrap();
    assert!(previous > 100.0 * multicolor::shot_noise_2wi(&ws).unwrap());
}
