//! Run configuration: CLI flags, optional config file, built-in defaults.
//!
//! Precedence is CLI flag > config file > default. The config file is
//! flat `key = value` lines with `#` comments; keys mirror the flag names.

use crate::error::{Error, Result};
use crate::lattice::{DEFAULT_EPSILON, DEFAULT_RAMP_WIDTH};
use crate::measurement::MeasurementKind;
use crate::strategies::Strategy;
use clap::Parser;
use std::path::{Path, PathBuf};

/// Environment variable overriding the default output directory.
pub const OUT_DIR_ENV: &str = "QAL_OUT";

/// The three reproducible experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    /// Lattice dump and single-shot weak values.
    Figure1,
    /// Strategy comparison across ensemble sizes.
    Figure2,
    /// Weak vs strong labeling under fidelity thresholds.
    Figure3,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Figure1 => "figure1",
            Experiment::Figure2 => "figure2",
            Experiment::Figure3 => "figure3",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "figure1" => Ok(Experiment::Figure1),
            "figure2" => Ok(Experiment::Figure2),
            "figure3" => Ok(Experiment::Figure3),
            other => Err(Error::InvalidParameter(format!(
                "unknown experiment '{other}' (expected figure1|figure2|figure3)"
            ))),
        }
    }
}

/// Raw command line; every option is optional so file and default values
/// can fill the gaps.
#[derive(Debug, Parser, Default)]
#[command(
    name = "qal",
    about = "Active-learning labeling of a qubit lattice under weak and strong measurement",
    disable_help_flag = false
)]
pub struct CliArgs {
    /// Experiment to run: figure1 | figure2 | figure3.
    #[arg(long)]
    pub experiment: Option<String>,
    /// Restrict figure2 to a single strategy (random | usamp_lc |
    /// usamp_margin | usamp_entropy | qbc_ve | qbc_kl).
    #[arg(long)]
    pub strategy: Option<String>,
    /// Restrict figure3 to one measurement kind: weak | strong.
    #[arg(long)]
    pub measurement: Option<String>,
    /// Ancilla spread sigma.
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Ensemble size per qubit; also restricts figure2 to this single n.
    #[arg(long)]
    pub n: Option<usize>,
    /// Maximum queried labels per episode.
    #[arg(long)]
    pub budget: Option<usize>,
    /// Restrict figure3 to a single fidelity threshold in (0, 1).
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Replications per experiment cell.
    #[arg(long)]
    pub replications: Option<usize>,
    /// Master seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also render SVG plots next to the CSVs.
    #[arg(long)]
    pub plot: bool,
    /// Optional config file (flat `key = value` lines).
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Fully resolved and validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub experiment: Experiment,
    /// Strategies swept by figure2.
    pub strategies: Vec<Strategy>,
    /// Ensemble sizes swept by figure2.
    pub n_values: Vec<usize>,
    /// Measurement kinds swept by figure3.
    pub kinds: Vec<MeasurementKind>,
    /// Thresholds swept by figure3.
    pub thresholds: Vec<f64>,
    pub sigma: f64,
    /// Ensemble size for figure3 (and figure2 when restricted).
    pub n_copies: usize,
    pub budget: usize,
    pub replications: usize,
    pub seed: u64,
    pub out_dir: PathBuf,
    pub plot: bool,
    pub ramp_width: f64,
    pub epsilon: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            experiment: Experiment::Figure2,
            strategies: vec![Strategy::Random, Strategy::UsampLc, Strategy::QbcVe],
            n_values: vec![5, 50, 100, 500],
            kinds: vec![MeasurementKind::Weak, MeasurementKind::Strong],
            thresholds: vec![0.8, 0.85, 0.9, 0.95, 0.99],
            sigma: 10.0,
            n_copies: 500,
            budget: 22,
            replications: 100,
            seed: 0,
            out_dir: PathBuf::from("out"),
            plot: false,
            ramp_width: DEFAULT_RAMP_WIDTH,
            epsilon: DEFAULT_EPSILON,
        }
    }
}

/// Key/value pairs from a config file, mirroring the CLI flag names.
#[derive(Debug, Default, Clone)]
pub struct FileArgs {
    pub experiment: Option<String>,
    pub strategy: Option<String>,
    pub measurement: Option<String>,
    pub sigma: Option<f64>,
    pub n: Option<usize>,
    pub budget: Option<usize>,
    pub threshold: Option<f64>,
    pub replications: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub plot: Option<bool>,
}

/// Parses a flat `key = value` config file with `#` comments.
pub fn parse_config_file(content: &str) -> Result<FileArgs> {
    let mut args = FileArgs::default();
    for (lineno, raw) in content.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Format(format!(
                "config line {}: expected 'key = value', got '{raw}'",
                lineno + 1
            )));
        };
        let key = key.trim();
        let value = value.trim();
        let bad =
            |what: &str| Error::Format(format!("config line {}: bad {what} '{value}'", lineno + 1));
        match key {
            "experiment" => args.experiment = Some(value.to_string()),
            "strategy" => args.strategy = Some(value.to_string()),
            "measurement" => args.measurement = Some(value.to_string()),
            "sigma" => args.sigma = Some(value.parse().map_err(|_| bad("float"))?),
            "n" => args.n = Some(value.parse().map_err(|_| bad("integer"))?),
            "budget" => args.budget = Some(value.parse().map_err(|_| bad("integer"))?),
            "threshold" => args.threshold = Some(value.parse().map_err(|_| bad("float"))?),
            "replications" => args.replications = Some(value.parse().map_err(|_| bad("integer"))?),
            "seed" => args.seed = Some(value.parse().map_err(|_| bad("integer"))?),
            "out" => args.out = Some(PathBuf::from(value)),
            "plot" => args.plot = Some(value.parse().map_err(|_| bad("bool"))?),
            other => {
                return Err(Error::Format(format!(
                    "config line {}: unknown key '{other}'",
                    lineno + 1
                )))
            }
        }
    }
    Ok(args)
}

/// Resolves CLI > config file > defaults into a validated [`RunConfig`].
pub fn resolve_config(cli: &CliArgs, file: &FileArgs) -> Result<RunConfig> {
    let mut config = RunConfig::default();

    if let Ok(dir) = std::env::var(OUT_DIR_ENV) {
        config.out_dir = PathBuf::from(dir);
    }

    let experiment = cli.experiment.as_deref().or(file.experiment.as_deref());
    if let Some(name) = experiment {
        config.experiment = Experiment::parse(name)?;
    }
    let strategy = cli.strategy.as_deref().or(file.strategy.as_deref());
    if let Some(name) = strategy {
        config.strategies = vec![Strategy::parse(name)?];
    }
    let kind = cli.measurement.as_deref().or(file.measurement.as_deref());
    if let Some(name) = kind {
        config.kinds = vec![MeasurementKind::parse(name)?];
    }
    if let Some(sigma) = cli.sigma.or(file.sigma) {
        if sigma.is_nan() || sigma <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "sigma must be positive, got {sigma}"
            )));
        }
        config.sigma = sigma;
    }
    if let Some(n) = cli.n.or(file.n) {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be at least 1".to_string()));
        }
        config.n_copies = n;
        config.n_values = vec![n];
    }
    if let Some(budget) = cli.budget.or(file.budget) {
        config.budget = budget;
    }
    if let Some(threshold) = cli.threshold.or(file.threshold) {
        if threshold.is_nan() || threshold <= 0.0 || threshold >= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "threshold must lie in (0, 1), got {threshold}"
            )));
        }
        config.thresholds = vec![threshold];
    }
    if let Some(replications) = cli.replications.or(file.replications) {
        if replications < 2 && config.experiment != Experiment::Figure1 {
            return Err(Error::InvalidParameter(
                "replications must be at least 2".to_string(),
            ));
        }
        config.replications = replications;
    }
    if let Some(seed) = cli.seed.or(file.seed) {
        config.seed = seed;
    }
    if let Some(out) = cli.out.clone().or_else(|| file.out.clone()) {
        config.out_dir = out;
    }
    config.plot = cli.plot || file.plot.unwrap_or(false);
    Ok(config)
}

/// Loads the optional config file named on the CLI and resolves.
pub fn parse_config(cli: &CliArgs) -> Result<RunConfig> {
    let file = match &cli.config {
        Some(path) => parse_config_file(&read_config(path)?)?,
        None => FileArgs::default(),
    };
    resolve_config(cli, &file)
}

fn read_config(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidParameter(format!("cannot read config file {path:?}: {e}")))
}
