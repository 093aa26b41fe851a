//! Run configuration. Values come from command-line flags, then an optional TOML file, then
//! defaults, in that order of precedence.

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

/// Environment variable holding a global cap on every order / step count.
pub const MAX_N_ENV: &str = "RULERLAB_MAX_N";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

/// Keys accepted in a `--config` file. All optional.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub n: Option<u32>,
    pub steps: Option<u32>,
    pub max_n: Option<u32>,
    pub lifespan: Option<u32>,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub transient: Option<usize>,
    pub format: Option<Format>,
    pub output: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("invalid config {}: {e}", path.display()))
    }
}

/// Fully resolved settings for one run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub n: u32,
    pub lifespan: Option<u32>,
    pub seed: u64,
    pub jitter: bool,
    pub tolerance: f64,
    pub transient: usize,
    pub format: Format,
    #[serde(skip)]
    pub output: Option<PathBuf>,
    /// Automaton seed point and ambient bounds.
    pub origin: f64,
    pub lo: f64,
    pub hi: f64,
    pub patterns: bool,
}

/// Reads the global cap, if set.
pub fn env_cap() -> Result<Option<u32>, String> {
    match std::env::var(MAX_N_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| format!("{MAX_N_ENV}={v:?} is not a non-negative integer")),
        Err(_) => Ok(None),
    }
}
