use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use quantbid::baseline::{compare_sweep, CompareOptions};
use quantbid::io::{format_number, to_json, write_comparison_csv, write_surface_csv};
use quantbid::mechanism::{build_mechanism, MechanismTable};
use quantbid::model::{AuctionInstance, ThresholdVector};
use quantbid::thresholds::{
    grid_search, optimize_symmetric, single_buyer_optimum, support_grids, SingleBuyerSolution,
};
use quantbid::verify::{monte_carlo, verify_table, VerifyOptions};
use serde::Serialize;
use thiserror::Error;

use crate::config::{ExperimentConfig, LoadError, ThresholdConfig};
use crate::RunArgs;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] quantbid::Error),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("checks failed: {}", .0.join(", "))]
    CheckFailed(Vec<String>),
}

impl CliError {
    pub const VALIDATION: u8 = 1;
    pub const CHECK_FAILED: u8 = 2;
    pub const CAPACITY_OR_IO: u8 = 3;

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => Self::VALIDATION,
            CliError::Core(quantbid::Error::Capacity(_) | quantbid::Error::Csv(_)) => {
                Self::CAPACITY_OR_IO
            }
            CliError::Core(_) => Self::VALIDATION,
            CliError::Io { .. } => Self::CAPACITY_OR_IO,
            CliError::CheckFailed(_) => Self::CHECK_FAILED,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn load(args: &RunArgs) -> Result<ExperimentConfig> {
    let mut config = ExperimentConfig::load(&args.config).map_err(|e| match e {
        LoadError::Io { path, source } => CliError::Io { path, source },
        LoadError::Invalid(msg) => {
            CliError::Invalid(format!("config {}: {msg}", args.config.display()))
        }
    })?;
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    Ok(config)
}

fn instance(config: &ExperimentConfig) -> Result<AuctionInstance> {
    let raw = config
        .instance
        .as_ref()
        .ok_or_else(|| CliError::Invalid("invalid instance: missing [instance] section".into()))?;
    Ok(raw.build()?)
}

/// Thresholds from the config: given explicitly or searched for.
fn thresholds(
    args: &RunArgs,
    config: &ExperimentConfig,
    instance: &AuctionInstance,
) -> Result<ThresholdVector> {
    match &config.thresholds {
        None => Err(CliError::Invalid(
            "invalid thresholds: missing [thresholds] section".into(),
        )),
        Some(ThresholdConfig::Explicit { eta }) => Ok(ThresholdVector::new(instance, eta.clone())?),
        Some(ThresholdConfig::Optimize { grid_step }) => {
            let step = args.grid_step.unwrap_or(*grid_step);
            Ok(search(instance, step)?.eta)
        }
    }
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// A table from disk when `path` is set, otherwise built from the config.
fn table(
    args: &RunArgs,
    config: &ExperimentConfig,
    path: Option<&PathBuf>,
) -> Result<MechanismTable> {
    match path {
        Some(path) => Ok(MechanismTable::from_json(&read_file(path)?)?),
        None => {
            let instance = instance(config)?;
            let eta = thresholds(args, config, &instance)?;
            Ok(build_mechanism(&instance, &eta)?)
        }
    }
}

fn emit(args: &RunArgs, config: &ExperimentConfig, bytes: &[u8]) -> Result<()> {
    match args.out.as_ref().or(config.output.path.as_ref()) {
        Some(path) => fs::write(path, bytes).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        }),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|source| CliError::Io {
                path: PathBuf::from("<stdout>"),
                source,
            }),
    }
}

fn tuple(values: &[f64]) -> String {
    let parts: Vec<String> = values.iter().map(|&x| format_number(x)).collect();
    format!("({})", parts.join(", "))
}

pub fn design(args: &RunArgs) -> Result<()> {
    let config = load(args)?;
    let table = table(args, &config, None)?;
    for (i, (u, eta)) in table
        .utilities()
        .iter()
        .zip(table.eta().as_slice())
        .enumerate()
    {
        eprintln!(
            "buyer {}: eta = {}, lambda = {}, u0 = {}, u1 = {}",
            i + 1,
            format_number(*eta),
            format_number(u.lambda),
            format_number(u.u0),
            format_number(u.u1)
        );
    }
    let gain = table.objective();
    eprintln!("gain = {}", format_number(gain));
    eprintln!("utility = {}", format_number(table.instance().v0() + gain));
    emit(args, &config, table.to_json().as_bytes())
}

pub fn sweep(args: &RunArgs) -> Result<()> {
    let config = load(args)?;
    let instance = instance(&config)?;
    let grids = match (
        &config.sweep.grids,
        args.grid_step.or(config.sweep.grid_step),
    ) {
        (Some(grids), None) => grids.clone(),
        (_, Some(step)) => support_grids(&instance, step),
        (None, None) => {
            return Err(CliError::Invalid(
                "invalid sweep: set sweep.grid_step, sweep.grids or --grid-step".into(),
            ))
        }
    };
    let result = grid_search(&instance, &grids)?;
    eprintln!(
        "argmax eta = {}, gain = {}, utility = {}",
        tuple(result.eta_opt.as_slice()),
        format_number(result.gain_opt),
        format_number(instance.v0() + result.gain_opt)
    );
    let ties: Vec<String> = result.ties.iter().map(|t| tuple(t)).collect();
    eprintln!("ties ({}): {}", ties.len(), ties.join(" "));
    let mut buf = Vec::new();
    write_surface_csv(&mut buf, instance.v0(), &result.surface)?;
    emit(args, &config, &buf)
}

pub fn verify(args: &RunArgs) -> Result<()> {
    let config = load(args)?;
    let table = table(args, &config, config.verify.table.as_ref())?;
    let options = VerifyOptions {
        grid_points: config.verify.grid_points,
        refuter_draws: config.verify.refuter_draws,
        seed: config.seed,
    };
    let report = verify_table(&table, &options)?;
    for check in &report.checks {
        eprintln!(
            "{} {}: violation {:e} (tolerance {:e})",
            if check.passed { "PASS" } else { "FAIL" },
            check.name,
            check.violation,
            check.tolerance
        );
    }
    emit(args, &config, to_json(&report)?.as_bytes())?;
    if report.passed {
        Ok(())
    } else {
        Err(CliError::CheckFailed(
            report
                .checks
                .iter()
                .filter(|c| !c.passed)
                .map(|c| c.name.clone())
                .collect(),
        ))
    }
}

pub fn simulate(args: &RunArgs) -> Result<()> {
    let config = load(args)?;
    let table = table(args, &config, config.simulate.table.as_ref())?;
    let trials = args.trials.unwrap_or(config.simulate.trials);
    let summary = monte_carlo(&table, trials, config.seed)?;
    eprintln!(
        "seller utility = {} +/- {} ({} trials)",
        format_number(summary.seller_utility.mean),
        format_number(summary.seller_utility.se),
        trials
    );
    emit(args, &config, to_json(&summary)?.as_bytes())
}

pub fn compare(args: &RunArgs) -> Result<()> {
    let config = load(args)?;
    let c = &config.compare;
    let options = CompareOptions {
        trials: args.trials.unwrap_or(c.trials),
        threshold_draws: c.threshold_draws,
        grid_step: args.grid_step.unwrap_or(c.grid_step),
        seed: config.seed,
    };
    let rows = compare_sweep(c.v0, c.a, c.b, &c.n_range, &options)?;
    let mut buf = Vec::new();
    write_comparison_csv(&mut buf, &rows)?;
    emit(args, &config, &buf)
}

#[derive(Debug, Serialize)]
struct OptimizeReport {
    method: &'static str,
    grid_step: f64,
    eta_opt: Vec<f64>,
    gain_opt: f64,
    utility_opt: f64,
    ties: Vec<Vec<f64>>,
    /// Whether all thresholds coincide; reported for the symmetric search only.
    symmetric: Option<bool>,
    single_buyer: Option<SingleBuyerSolution>,
}

struct Optimum {
    method: &'static str,
    eta: ThresholdVector,
    gain: f64,
    ties: Vec<Vec<f64>>,
    symmetric: Option<bool>,
}

/// Full grid search when it fits the budget; the symmetric search when it
/// does not and every buyer shares one distribution.
fn search(instance: &AuctionInstance, step: f64) -> Result<Optimum> {
    match grid_search(instance, &support_grids(instance, step)) {
        Ok(r) => Ok(Optimum {
            method: "grid",
            eta: r.eta_opt,
            gain: r.gain_opt,
            ties: r.ties,
            symmetric: None,
        }),
        Err(quantbid::Error::Capacity(msg)) => {
            if instance.buyers().iter().any(|b| b != instance.buyer(0)) {
                return Err(quantbid::Error::Capacity(msg).into());
            }
            let s = optimize_symmetric(instance, step)?;
            Ok(Optimum {
                method: "symmetric",
                ties: vec![s.eta_opt.as_slice().to_vec()],
                eta: s.eta_opt,
                gain: s.gain_opt,
                symmetric: Some(s.symmetric),
            })
        }
        Err(e) => Err(e.into()),
    }
}

pub fn optimize(args: &RunArgs) -> Result<()> {
    let config = load(args)?;
    let instance = instance(&config)?;
    let step =
        match (args.grid_step, &config.thresholds, config.sweep.grid_step) {
            (Some(step), _, _) => step,
            (None, Some(ThresholdConfig::Optimize { grid_step }), _) => *grid_step,
            (None, _, Some(step)) => step,
            _ => return Err(CliError::Invalid(
                "invalid grid_step: set thresholds.grid_step (mode = \"optimize\") or --grid-step"
                    .into(),
            )),
        };
    let optimum = search(&instance, step)?;
    let single_buyer = if instance.len() == 1 {
        let b = instance.buyer(0);
        Some(single_buyer_optimum(instance.v0(), b.lower(), b.upper())?)
    } else {
        None
    };
    eprintln!(
        "{} search: eta = {}, gain = {}",
        optimum.method,
        tuple(optimum.eta.as_slice()),
        format_number(optimum.gain)
    );
    let report = OptimizeReport {
        method: optimum.method,
        grid_step: step,
        eta_opt: optimum.eta.as_slice().to_vec(),
        gain_opt: optimum.gain,
        utility_opt: instance.v0() + optimum.gain,
        ties: optimum.ties,
        symmetric: optimum.symmetric,
        single_buyer,
    };
    emit(args, &config, to_json(&report)?.as_bytes())
}
