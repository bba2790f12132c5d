use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::Serialize;

use crate::CliError;

/// Environment variable that replaces the default seed.
pub const SEED_ENV: &str = "GMLAB_SEED";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Eval,
    OrderCheck,
    Mc,
    VerifyPaper,
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// RNG seed; defaults to $GMLAB_SEED, then 0.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Monte Carlo replications.
    #[arg(long, default_value_t = 1_000_000)]
    pub reps: usize,
    /// Points per grid in order checks.
    #[arg(long, default_value_t = 512)]
    pub grid_size: usize,
    /// Absolute tolerance of order checks.
    #[arg(long, default_value_t = 1e-7)]
    pub tol: f64,
    /// Write the result here (atomically) instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

/// Fully resolved settings of one invocation.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub target: String,
    pub params: BTreeMap<String, f64>,
    pub seed: u64,
    pub reps: usize,
    pub grid_size: usize,
    pub tol: f64,
    #[serde(skip)]
    pub output_path: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    pub fn new(
        command: Command,
        target: impl Into<String>,
        params: BTreeMap<String, f64>,
        common: &CommonArgs,
        default_format: Format,
    ) -> Result<Self, CliError> {
        let seed = match common.seed {
            Some(s) => s,
            None => match std::env::var(SEED_ENV) {
                Ok(v) => {
                    v.trim().parse().map_err(|_| CliError::Usage(format!("{SEED_ENV}={v} is not a 64-bit seed")))?
                }
                Err(_) => 0,
            },
        };
        if common.reps < 1 {
            return Err(CliError::Usage("--reps must be at least 1".into()));
        }
        if common.grid_size < 2 {
            return Err(CliError::Usage("--grid-size must be at least 2".into()));
        }
        if !(common.tol > 0.0) {
            return Err(CliError::Usage("--tol must be positive".into()));
        }
        Ok(Self {
            command,
            target: target.into(),
            params,
            seed,
            reps: common.reps,
            grid_size: common.grid_size,
            tol: common.tol,
            output_path: common.output.clone(),
            format: common.format.unwrap_or(default_format),
        })
    }

    /// A parameter that must be present.
    pub fn param(&self, key: &str) -> Result<f64, CliError> {
        self.params.get(key).copied().ok_or_else(|| CliError::Usage(format!("{} needs --{key}", self.target)))
    }
}

/// Collects the optional numeric flags that were given.
pub fn params(pairs: &[(&str, Option<f64>)]) -> BTreeMap<String, f64> {
    pairs.iter().filter_map(|&(k, v)| v.map(|v| (k.to_string(), v))).collect()
}
