use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_comb-ranger"));
    c.env_remove("COMB_RANGER_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn value(text: &str, key: &str) -> f64 {
    let prefix = format!("{key} = ");
    text.lines()
        .find_map(|l| l.strip_prefix(&prefix))
        .unwrap_or_else(|| panic!("missing {key}"))
        .split_whitespace()
        .next()
        .unwrap()
        .parse()
        .unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("comb-ranger-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn air_index_standard_air() {
    let o = run(&["air-index", "--wavelength", "633"]);
    assert!(o.status.success());
    let n1 = value(&stdout(&o), "n_phase_minus_1");
    assert!((2.6e-4..2.8e-4).contains(&n1), "{n1}");
    assert!(value(&stdout(&o), "n_group_minus_1") > n1);
}

#[test]
fn air_index_vacuum_is_unity() {
    let o = run(&["air-index", "--pressure", "0", "--humidity-pa", "0"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert_eq!(value(&s, "n_phase"), 1.0);
    assert_eq!(value(&s, "n_group"), 1.0);
}

#[test]
fn air_index_bad_temperature_names_field() {
    let o = run(&["air-index", "--temperature", "500"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("temperature"));
}

#[test]
fn bad_flags_exit_two() {
    assert_eq!(run(&["air-index", "--colour", "3"]).status.code(), Some(2));
    assert_eq!(run(&["teleport"]).status.code(), Some(2));
}

#[test]
fn modes_table_and_profiles() {
    let file = scratch("profiles.csv");
    let o = run(&["modes", "--profiles", file.to_str().unwrap()]);
    assert!(o.status.success());
    let table = stdout(&o);
    let w_l: Vec<f64> = table
        .lines()
        .find(|l| l.starts_with("w_L,"))
        .unwrap()
        .split(',')
        .skip(3)
        .map(|v| v.parse().unwrap())
        .collect();
    assert_eq!(w_l[2], 0.0);
    assert!(w_l[0] > 0.0 && w_l[1] > 0.0);

    let text = std::fs::read_to_string(&file).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(header, ["x", "u", "v0", "v1", "v2", "w_L", "w_L_p", "w_X", "w_Pw"]);
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    let dx = rows[1][0] - rows[0][0];
    // trapezoid in the normalized detuning; amplitudes already carry √Δω
    let integral = |a: usize, b: usize| -> f64 {
        let n = rows.len();
        rows.iter()
            .enumerate()
            .map(|(i, r)| {
                let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
                w * r[a] * r[b]
            })
            .sum::<f64>()
            * dx
    };
    for c in 1..header.len() {
        assert!((integral(c, c) - 1.0).abs() < 1e-6, "{}: {}", header[c], integral(c, c));
    }
    assert!(integral(6, 7).abs() < 1e-6);
    assert!(integral(6, 8).abs() < 1e-6);
    let _ = std::fs::remove_file(file);
}

#[test]
fn sensitivity_reproduces_numbers_block() {
    let o = run(&["sensitivity"]);
    assert!(o.status.success());
    let s = stdout(&o);
    let raw = value(&s, "delta_l_raw_m");
    assert!((1.5e-16..3e-16).contains(&raw), "{raw}");
    let full = value(&s, "delta_l_purified_m");
    assert!((1e-11..3e-11).contains(&full), "{full}");
    assert!(value(&s, "delta_l_x_only_m") < full);
    let x = value(&s, "x_prefactor_per_m");
    assert!((x - 2.7e-4).abs() < 0.05e-4, "{x}");
    let pw = value(&s, "pw_prefactor_per_m_pa");
    assert!((pw + 3.7e-10).abs() < 0.05e-10, "{pw}");
    assert!(s.contains("[contamination]"));
}

#[test]
fn multicolor_csv() {
    let o = run(&["multicolor"]);
    assert!(o.status.success());
    let s = stdout(&o);
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(
        lines[0],
        "scheme,wavelengths_nm,photons,alpha,beta,gamma,delta_l_shot_m,humidity_bias_m"
    );
    let two: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(two[0], "2wi");
    let alpha: f64 = two[3].parse().unwrap();
    assert!((55.0..75.0).contains(&alpha));
    let dl: f64 = two[6].parse().unwrap();
    assert!((2e-14..4e-14).contains(&dl));
    let three: Vec<&str> = lines[2].split(',').collect();
    assert_eq!(three[0], "3wi");
    let dl3: f64 = three[6].parse().unwrap();
    assert!((3e-13..3e-12).contains(&dl3));

    let moist = run(&["multicolor", "--scheme", "2wi", "--humidity-pa", "1000"]);
    let row: Vec<String> = stdout(&moist).lines().nth(1).unwrap().split(',').map(String::from).collect();
    let bias: f64 = row[7].parse().unwrap();
    assert!(bias < 0.0);
}

#[test]
fn multicolor_rejects_degenerate_sets() {
    let o = run(&["multicolor", "--scheme", "3wi", "--wavelengths", "1064,1064,355"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["multicolor", "--scheme", "2wi", "--wavelengths", "1064,532,355"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn simulate_is_deterministic_and_immune() {
    let a = run(&["simulate", "--seed", "11", "--samples", "40000"]);
    let b = run(&["simulate", "--seed", "11", "--samples", "40000"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).lines().any(|l| l == "immune: true"));
}

#[test]
fn simulate_default_scenario() {
    let o = run(&["simulate"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("immune: true"));
}

#[test]
fn simulate_raw_lo_is_not_immune_and_writes_samples() {
    let file = scratch("samples.csv");
    let o = run(&["simulate", "--lo", "raw", "--samples", "5000", "--out", file.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("immune: false"));
    let text = std::fs::read_to_string(&file).unwrap();
    assert_eq!(text.lines().next().unwrap(), "index,p_length_m,p_density,p_water_vapor_pa,signal_m");
    assert_eq!(text.lines().count(), 5001);
    let _ = std::fs::remove_file(file);
}

#[test]
fn simulate_zero_samples_is_validation_error() {
    assert_eq!(run(&["simulate", "--samples", "0"]).status.code(), Some(2));
}

#[test]
fn seed_env_applies_unless_flag_given() {
    let with_env = bin()
        .args(["simulate", "--samples", "2000"])
        .env("COMB_RANGER_SEED", "42")
        .output()
        .unwrap();
    let with_flag = run(&["simulate", "--samples", "2000", "--seed", "42"]);
    assert_eq!(with_env.stdout, with_flag.stdout);
    let both = bin()
        .args(["simulate", "--samples", "2000", "--seed", "42"])
        .env("COMB_RANGER_SEED", "7")
        .output()
        .unwrap();
    assert_eq!(both.stdout, with_flag.stdout);
    let bad = bin()
        .args(["simulate", "--samples", "10"])
        .env("COMB_RANGER_SEED", "seven")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn config_file_is_honoured_and_strict() {
    let good = scratch("good.toml");
    std::fs::write(&good, "[path]\nlength_m = 2.0\n[simulate]\nseed = 5\nsamples = 1000\n").unwrap();
    let o = run(&["simulate", "--config", good.to_str().unwrap()]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert_eq!(value(&s, "seed"), 5.0);
    assert_eq!(value(&s, "samples"), 1000.0);
    let flagged = run(&["simulate", "--config", good.to_str().unwrap(), "--samples", "500"]);
    assert_eq!(value(&stdout(&flagged), "samples"), 500.0);

    let bad = scratch("bad.toml");
    std::fs::write(&bad, "[path]\nlength = 10.0\n").unwrap();
    let o = run(&["sensitivity", "--config", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("length"));
    let _ = std::fs::remove_file(good);
    let _ = std::fs::remove_file(bad);
}
