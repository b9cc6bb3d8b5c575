//! Command-line flags, JSON config files and their merge into [`Settings`].

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Parser, Debug)]
#[command(
    name = "meshprune",
    version,
    about = "Rotation statistics and pruning experiments on Clements meshes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Draw Haar-random unitaries and write their mesh plans.
    Gen(CommonArgs),
    /// Fit rotation-angle distributions of previously generated plans.
    Fit(FitArgs),
    /// Fidelity under pruning and noise with per-circuit ranking.
    Sweep(SweepArgs),
    /// Pruning thresholds from a sweep table or a fresh sweep.
    Threshold(ThresholdArgs),
    /// Ensemble-averaged architecture and sweeps with its fixed ranking.
    Universal(UniversalArgs),
    /// Bloch-sphere images of a grid of states under random blocks.
    Bloch(BlochArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Gen(_) => "gen",
            Command::Fit(_) => "fit",
            Command::Sweep(_) => "sweep",
            Command::Threshold(_) => "threshold",
            Command::Universal(_) => "universal",
            Command::Bloch(_) => "bloch",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(&self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Args, Debug, Default, Clone)]
pub struct CommonArgs {
    /// Matrix sizes, comma separated or repeated.
    #[arg(long, value_delimiter = ',')]
    pub n: Option<Vec<usize>>,
    /// Realizations per size.
    #[arg(long)]
    pub ensemble: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Worker threads; 0 uses every core.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// JSON file with default values; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args, Debug, Default, Clone)]
pub struct FitArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// pl, plc, ln, exp or all; comma separated.
    #[arg(long)]
    pub model: Option<String>,
    /// Directory holding plan_n{n}_r{k}.json files.
    #[arg(long)]
    pub from: Option<PathBuf>,
}

#[derive(Args, Debug, Default, Clone)]
pub struct SweepFlags {
    /// Noise amplitude in units of pi; repeat or comma separate.
    #[arg(long, value_delimiter = ',')]
    pub delta0: Option<Vec<f64>>,
    #[arg(long)]
    pub ratio_step: Option<f64>,
}

#[derive(Args, Debug, Default, Clone)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub sweep: SweepFlags,
}

#[derive(Args, Debug, Default, Clone)]
pub struct ThresholdArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub sweep: SweepFlags,
    /// Existing sweep CSV; when absent a sweep is run first.
    #[arg(long)]
    pub from: Option<PathBuf>,
}

#[derive(Args, Debug, Default, Clone)]
pub struct UniversalArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub sweep: SweepFlags,
    /// Circuits averaged into the architecture.
    #[arg(long)]
    pub train: Option<usize>,
    /// Held-out circuits evaluated with the averaged ranking.
    #[arg(long)]
    pub test: Option<usize>,
}

#[derive(Args, Debug, Default, Clone)]
pub struct BlochArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// theta-only, phi-only, both or all.
    #[arg(long)]
    pub mode: Option<String>,
    #[arg(long)]
    pub polar: Option<usize>,
    #[arg(long)]
    pub azimuthal: Option<usize>,
}

/// Contents of a `--config` file. Keys that a command does not use are
/// accepted and ignored; unknown keys are an error.
#[derive(Debug, Default, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub n: Option<Vec<usize>>,
    pub ensemble: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub jobs: Option<usize>,
    pub model: Option<String>,
    pub from: Option<PathBuf>,
    pub delta0: Option<Vec<f64>>,
    pub ratio_step: Option<f64>,
    pub train: Option<usize>,
    pub test: Option<usize>,
    pub mode: Option<String>,
    pub polar: Option<usize>,
    pub azimuthal: Option<usize>,
}

impl FileConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        Self::from_json(&text).with_context(|| format!("parsing config {}", path.display()))
    }
}

pub const DEFAULT_SIZES: [usize; 4] = [16, 32, 64, 128];
pub const DEFAULT_ENSEMBLE: usize = 100;
pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_RATIO_STEP: f64 = 0.01;
pub const SWEEP_DELTA0: [f64; 5] = [0.02, 0.04, 0.06, 0.08, 0.10];
pub const UNIVERSAL_DELTA0: [f64; 2] = [0.10, 0.20];

/// Fully resolved parameters of one command run, recorded in the manifest.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Settings {
    pub command: String,
    /// Empty for `fit` without `--n`, meaning every size found.
    pub n: Vec<usize>,
    pub ensemble: usize,
    pub seed: u64,
    pub out: PathBuf,
    pub format: Format,
    pub jobs: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub from: Option<PathBuf>,
    /// Units of pi.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta0: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio_step: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub train: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub test: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub polar: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub azimuthal: Option<usize>,
}

fn common_settings(command: &str, c: &CommonArgs, file: &FileConfig, default_n: &[usize]) -> Result<Settings> {
    let s = Settings {
        command: command.to_string(),
        n: c.n
            .clone()
            .or_else(|| file.n.clone())
            .unwrap_or_else(|| default_n.to_vec()),
        ensemble: c.ensemble.or(file.ensemble).unwrap_or(DEFAULT_ENSEMBLE),
        seed: c.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
        out: c
            .out
            .clone()
            .or_else(|| file.out.clone())
            .unwrap_or_else(|| PathBuf::from("out")),
        format: c.format.or(file.format).unwrap_or(Format::Csv),
        jobs: c.jobs.or(file.jobs).unwrap_or(0),
        model: None,
        from: None,
        delta0: None,
        ratio_step: None,
        train: None,
        test: None,
        mode: None,
        polar: None,
        azimuthal: None,
    };
    if let Some(&bad) = s.n.iter().find(|&&n| n < 2) {
        bail!("matrix size must be at least 2, got {bad}");
    }
    if s.ensemble == 0 {
        bail!("ensemble must be at least 1");
    }
    Ok(s)
}

fn sweep_settings(s: &mut Settings, f: &SweepFlags, file: &FileConfig, default_delta0: &[f64]) -> Result<()> {
    let delta0 = f
        .delta0
        .clone()
        .or_else(|| file.delta0.clone())
        .unwrap_or_else(|| default_delta0.to_vec());
    if let Some(bad) = delta0.iter().find(|d| !(d.is_finite() && **d >= 0.0)) {
        bail!("delta0 must be finite and non-negative, got {bad}");
    }
    let step = f.ratio_step.or(file.ratio_step).unwrap_or(DEFAULT_RATIO_STEP);
    if !(step > 0.0 && step <= 1.0) {
        bail!("ratio step must be in (0, 1], got {step}");
    }
    s.delta0 = Some(delta0);
    s.ratio_step = Some(step);
    Ok(())
}

fn load_file(c: &CommonArgs) -> Result<FileConfig> {
    match &c.config {
        Some(path) => FileConfig::load(path),
        None => Ok(FileConfig::default()),
    }
}

impl Settings {
    /// Merges flags over the config file over built-in defaults.
    pub fn resolve(command: &Command) -> Result<Settings> {
        let name = command.name();
        match command {
            Command::Gen(c) => common_settings(name, c, &load_file(c)?, &DEFAULT_SIZES),
            Command::Fit(a) => {
                let file = load_file(&a.common)?;
                let mut s = common_settings(name, &a.common, &file, &[])?;
                s.model = Some(
                    a.model
                        .clone()
                        .or_else(|| file.model.clone())
                        .unwrap_or_else(|| "all".into()),
                );
                s.from = a.from.clone().or_else(|| file.from.clone());
                if s.from.is_none() {
                    bail!("fit needs --from <directory of plan files>");
                }
                Ok(s)
            }
            Command::Sweep(a) => {
                let file = load_file(&a.common)?;
                let mut s = common_settings(name, &a.common, &file, &DEFAULT_SIZES)?;
                sweep_settings(&mut s, &a.sweep, &file, &SWEEP_DELTA0)?;
                Ok(s)
            }
            Command::Threshold(a) => {
                let file = load_file(&a.common)?;
                let mut s = common_settings(name, &a.common, &file, &DEFAULT_SIZES)?;
                sweep_settings(&mut s, &a.sweep, &file, &SWEEP_DELTA0)?;
                s.from = a.from.clone().or_else(|| file.from.clone());
                Ok(s)
            }
            Command::Universal(a) => {
                let file = load_file(&a.common)?;
                let mut s = common_settings(name, &a.common, &file, &DEFAULT_SIZES)?;
                sweep_settings(&mut s, &a.sweep, &file, &UNIVERSAL_DELTA0)?;
                let train = a.train.or(file.train).unwrap_or(DEFAULT_ENSEMBLE);
                let test = a.test.or(file.test).unwrap_or(DEFAULT_ENSEMBLE);
                if train == 0 || test == 0 {
                    bail!("train and test sizes must be at least 1");
                }
                s.train = Some(train);
                s.test = Some(test);
                Ok(s)
            }
            Command::Bloch(a) => {
                let file = load_file(&a.common)?;
                let mut s = common_settings(name, &a.common, &file, &[])?;
                s.mode = Some(
                    a.mode
                        .clone()
                        .or_else(|| file.mode.clone())
                        .unwrap_or_else(|| "both".into()),
                );
                s.polar = Some(a.polar.or(file.polar).unwrap_or(200));
                s.azimuthal = Some(a.azimuthal.or(file.azimuthal).unwrap_or(400));
                Ok(s)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(FileConfig::from_json(r#"{"seed": 3, "colour": "red"}"#).is_err());
        let c = FileConfig::from_json(r#"{"seed": 3, "delta0": [0.1], "format": "json"}"#).unwrap();
        assert_eq!(c.seed, Some(3));
        assert_eq!(c.format, Some(Format::Json));
    }

    #[test]
    fn flags_win_over_file() {
        let dir = std::env::temp_dir().join(format!("meshprune-config-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("cfg.json");
        std::fs::write(&path, r#"{"seed": 3, "ensemble": 7, "ratio_step": 0.5}"#).unwrap();
        let cli =
            Cli::try_parse_from(["meshprune", "sweep", "--config", path.to_str().unwrap(), "--seed", "9"]).unwrap();
        let s = Settings::resolve(&cli.command).unwrap();
        assert_eq!((s.seed, s.ensemble, s.ratio_step), (9, 7, Some(0.5)));
        assert_eq!(s.delta0.as_deref(), Some(&SWEEP_DELTA0[..]));
        std::fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn lists_accept_commas_and_repeats() {
        let cli =
            Cli::try_parse_from(["meshprune", "sweep", "--n", "4,8", "--delta0", "0.1", "--delta0", "0.2"]).unwrap();
        let s = Settings::resolve(&cli.command).unwrap();
        assert_eq!(s.n, vec![4, 8]);
        assert_eq!(s.delta0, Some(vec![0.1, 0.2]));
    }

    #[test]
    fn out_of_range_values_fail() {
        for args in [
            vec!["meshprune", "gen", "--n", "1"],
            vec!["meshprune", "gen", "--ensemble", "0"],
            vec!["meshprune", "sweep", "--ratio-step", "0"],
            vec!["meshprune", "sweep", "--delta0=-0.1"],
            vec!["meshprune", "universal", "--train", "0"],
            vec!["meshprune", "fit"],
        ] {
            let cli = Cli::try_parse_from(&args).unwrap();
            assert!(Settings::resolve(&cli.command).is_err(), "{args:?}");
        }
    }
}
