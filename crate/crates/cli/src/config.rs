//! Experiment configuration: one TOML file per run.
//!
//! Relative paths inside the file resolve against the file's own directory.

use std::path::{Path, PathBuf};

use quantbid::model::{AuctionInstance, BuyerSpec};
use quantbid::thresholds::GridSpec;
use serde::Deserialize;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub seed: u64,
    pub instance: Option<InstanceConfig>,
    pub thresholds: Option<ThresholdConfig>,
    #[serde(default)]
    pub sweep: SweepConfig,
    #[serde(default)]
    pub verify: VerifyConfig,
    #[serde(default)]
    pub simulate: SimulateConfig,
    #[serde(default)]
    pub compare: CompareConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

/// Instance as written; validated by [`InstanceConfig::build`] so that size
/// errors keep their own exit code.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceConfig {
    pub v0: f64,
    pub buyers: Vec<BuyerSpec>,
}

impl InstanceConfig {
    pub fn build(&self) -> quantbid::Result<AuctionInstance> {
        AuctionInstance::new(self.v0, self.buyers.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case", deny_unknown_fields)]
pub enum ThresholdConfig {
    Explicit { eta: Vec<f64> },
    Optimize { grid_step: f64 },
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    /// One step for every buyer's full support.
    pub grid_step: Option<f64>,
    /// Explicit per-buyer grids; overrides `grid_step`.
    pub grids: Option<Vec<GridSpec>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    /// Table to check. Without it the table is built from `instance` and `thresholds`.
    pub table: Option<PathBuf>,
    #[serde(default = "default_grid_points")]
    pub grid_points: usize,
    #[serde(default = "default_refuter_draws")]
    pub refuter_draws: usize,
}

fn default_grid_points() -> usize {
    101
}

fn default_refuter_draws() -> usize {
    1000
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            table: None,
            grid_points: default_grid_points(),
            refuter_draws: default_refuter_draws(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateConfig {
    /// Table to simulate. Without it the table is built from `instance` and `thresholds`.
    pub table: Option<PathBuf>,
    #[serde(default = "default_simulate_trials")]
    pub trials: u64,
}

fn default_simulate_trials() -> u64 {
    1_000_000
}

impl Default for SimulateConfig {
    fn default() -> Self {
        SimulateConfig {
            table: None,
            trials: default_simulate_trials(),
        }
    }
}

/// Analog versus quantized bidding for i.i.d. uniform bidders.
///
/// The default `v0 = 5` (the seller values the object at the lowest possible
/// bid) is an assumption, not a measured setting.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CompareConfig {
    pub v0: f64,
    pub a: f64,
    pub b: f64,
    pub n_range: Vec<usize>,
    pub trials: u64,
    pub threshold_draws: u64,
    pub grid_step: f64,
}

impl Default for CompareConfig {
    fn default() -> Self {
        CompareConfig {
            v0: 5.0,
            a: 5.0,
            b: 20.0,
            n_range: (1..=8).collect(),
            trials: 1_000_000,
            threshold_draws: 1000,
            grid_step: 0.05,
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub path: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| e.to_string())
    }

    pub fn load(path: &Path) -> Result<Self, LoadError> {
        let text = std::fs::read_to_string(path).map_err(|source| LoadError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut config = Self::parse(&text).map_err(LoadError::Invalid)?;
        let base = path.parent().unwrap_or(Path::new(""));
        for slot in [
            &mut config.verify.table,
            &mut config.simulate.table,
            &mut config.output.path,
        ] {
            if let Some(p) = slot.as_mut() {
                if p.is_relative() {
                    *p = base.join(&*p);
                }
            }
        }
        Ok(config)
    }
}

#[derive(Debug)]
pub enum LoadError {
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    Invalid(String),
}
