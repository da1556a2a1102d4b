use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod config;

use config::{LoConfig, RunConfig};

pub const SEED_ENV: &str = "COMB_RANGER_SEED";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error(transparent)]
    Core(#[from] comb_ranger::Error),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Core(e) if e.is_validation() => 2,
            _ => 3,
        }
    }
}

/// Frequency-comb ranging in air: detection modes, sensitivities and
/// multi-wavelength baselines.
#[derive(Debug, Parser)]
#[command(name = "comb-ranger", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Phase and group index of air with the dispersion scalars at one wavelength.
    AirIndex(AirIndexArgs),
    /// Detection-mode coefficient table (stdout) and sampled spectral profiles.
    Modes(ModesArgs),
    /// Shot-noise limits, contamination matrix and purified sensitivities.
    Sensitivity(ConfigArg),
    /// Two- and three-wavelength interferometry comparison as CSV.
    Multicolor(MulticolorArgs),
    /// Monte-Carlo homodyne ranging with fluctuating air.
    Simulate(SimulateArgs),
}

#[derive(Debug, Args)]
struct ConfigArg {
    /// TOML run configuration; built-in defaults when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct AirIndexArgs {
    /// Vacuum wavelength, nm.
    #[arg(long, default_value_t = 633.0)]
    wavelength: f64,
    /// Temperature, °C.
    #[arg(long, default_value_t = 20.0, allow_negative_numbers = true)]
    temperature: f64,
    /// Total pressure, Pa.
    #[arg(long, default_value_t = 101_325.0, allow_negative_numbers = true)]
    pressure: f64,
    /// CO₂ content, percent by volume.
    #[arg(long, default_value_t = 0.04, allow_negative_numbers = true)]
    co2: f64,
    /// Partial pressure of water vapour, Pa.
    #[arg(long = "humidity-pa", default_value_t = 0.0, allow_negative_numbers = true)]
    humidity_pa: f64,
}

#[derive(Debug, Args)]
struct ModesArgs {
    #[command(flatten)]
    config: ConfigArg,
    /// Write sampled spectral profiles to this CSV file.
    #[arg(long)]
    profiles: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SchemeArg {
    #[value(name = "2wi")]
    Two,
    #[value(name = "3wi")]
    Three,
}

#[derive(Debug, Args)]
struct MulticolorArgs {
    #[command(flatten)]
    config: ConfigArg,
    /// Scheme; both are emitted when omitted.
    #[arg(long, value_enum)]
    scheme: Option<SchemeArg>,
    /// Comma-separated vacuum wavelengths, nm.
    #[arg(long, value_delimiter = ',')]
    wavelengths: Option<Vec<f64>>,
    /// Total photon number, shared equally between wavelengths.
    #[arg(long)]
    photons: Option<f64>,
    /// Water vapour partial pressure overriding the config, Pa.
    #[arg(long = "humidity-pa")]
    humidity_pa: Option<f64>,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    config: ConfigArg,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    samples: Option<usize>,
    /// Local oscillator.
    #[arg(long, value_enum)]
    lo: Option<LoArg>,
    /// Write per-sample CSV here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum LoArg {
    Raw,
    Purified,
    XOnly,
}

impl From<LoArg> for LoConfig {
    fn from(lo: LoArg) -> Self {
        match lo {
            LoArg::Raw => LoConfig::Raw,
            LoArg::Purified => LoConfig::Purified,
            LoArg::XOnly => LoConfig::XOnly,
        }
    }
}

fn seed_from_env() -> Result<Option<u64>, CliError> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::Validation(format!("invalid {SEED_ENV}: {v:?} is not a u64"))),
        Err(_) => Ok(None),
    }
}

fn dispatch(cli: Cli, out: &mut impl Write) -> Result<(), CliError> {
    match cli.command {
        Command::AirIndex(a) => {
            commands::air_index(out, a.wavelength, a.temperature, a.pressure, a.co2, a.humidity_pa)
        }
        Command::Modes(a) => {
            let cfg = RunConfig::load(a.config.config.as_deref())?;
            commands::modes(out, &cfg, a.profiles.as_deref())
        }
        Command::Sensitivity(a) => {
            let cfg = RunConfig::load(a.config.as_deref())?;
            commands::sensitivity(out, &cfg)
        }
        Command::Multicolor(a) => {
            let mut cfg = RunConfig::load(a.config.config.as_deref())?;
            if let Some(pw) = a.humidity_pa {
                cfg.air.water_vapor_pa = pw;
            }
            if let Some(n) = a.photons {
                cfg.photons = n;
            }
            let sets: Vec<Vec<f64>> = match (a.scheme, a.wavelengths) {
                (None, None) => vec![vec![1064.0, 532.0], vec![1064.0, 532.0, 355.0]],
                (None, Some(w)) => vec![w],
                (Some(SchemeArg::Two), w) => vec![w.unwrap_or_else(|| vec![1064.0, 532.0])],
                (Some(SchemeArg::Three), w) => vec![w.unwrap_or_else(|| vec![1064.0, 532.0, 355.0])],
            };
            let expected = a.scheme.map(|s| match s {
                SchemeArg::Two => 2,
                SchemeArg::Three => 3,
            });
            if let Some(n) = expected {
                if sets[0].len() != n {
                    return Err(CliError::Validation(format!(
                        "invalid wavelengths: scheme needs {n} wavelengths, got {}",
                        sets[0].len()
                    )));
                }
            }
            commands::multicolor(out, &cfg, &sets)
        }
        Command::Simulate(a) => {
            let mut cfg = RunConfig::load(a.config.config.as_deref())?;
            if let Some(seed) = a.seed.or(seed_from_env()?) {
                cfg.simulate.seed = seed;
            }
            if let Some(n) = a.samples {
                cfg.simulate.samples = n;
            }
            if let Some(lo) = a.lo {
                cfg.simulate.lo = lo.into();
            }
            commands::simulate(out, &cfg, a.out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let result = dispatch(cli, &mut out).and_then(|()| out.flush().map_err(CliError::from));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
