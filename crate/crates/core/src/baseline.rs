//! Comparators for quantized bidding: the analog optimal auction and random thresholds.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mechanism::expected_seller_gain;
use crate::model::{AuctionInstance, ThresholdVector};
use crate::stats::{derive_seed, run_sharded, shard_rng, Estimate, RunningStats, DEFAULT_SHARDS};
use crate::thresholds::optimize_symmetric;

/// Reserve price of the analog optimal auction for i.i.d. `Uniform[a, b]` values.
pub fn uniform_reserve(v0: f64, a: f64, b: f64) -> f64 {
    ((b + v0) / 2.0).clamp(a, b)
}

/// Seller utility of the analog optimal auction for `n` i.i.d. `Uniform[a, b]` bidders.
///
/// For these bidders the optimal analog mechanism is a second-price auction
/// with reserve [`uniform_reserve`]. When `v0 > b` the seller never sells and
/// the result is `v0` exactly.
pub fn myerson_uniform(
    v0: f64,
    a: f64,
    b: f64,
    n: usize,
    trials: u64,
    seed: u64,
) -> Result<Estimate> {
    if !(v0.is_finite() && a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::invalid(
            "support",
            format!("need finite a < b, got [{a}, {b}]"),
        ));
    }
    if n == 0 {
        return Err(Error::invalid("n", "need at least one bidder"));
    }
    if trials == 0 {
        return Err(Error::invalid("trials", "need at least one trial"));
    }
    if v0 > b {
        return Ok(Estimate::exact(v0));
    }
    let r = uniform_reserve(v0, a, b);
    let width = b - a;
    let shards = run_sharded(trials, DEFAULT_SHARDS, seed, |rng, count| {
        let mut stats = RunningStats::default();
        for _ in 0..count {
            let (mut first, mut second) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
            for _ in 0..n {
                let v = a + width * rng.random::<f64>();
                if v > first {
                    second = first;
                    first = v;
                } else if v > second {
                    second = v;
                }
            }
            stats.push(if first >= r { second.max(r) } else { v0 });
        }
        stats
    });
    let mut total = RunningStats::default();
    for s in &shards {
        total.merge(s);
    }
    Ok(total.estimate())
}

/// Closed-form analog seller gain for one bidder: a posted price at the reserve.
pub fn posted_price_gain(v0: f64, a: f64, b: f64) -> f64 {
    if v0 > b {
        return 0.0;
    }
    let r = uniform_reserve(v0, a, b);
    (b - r) * (r - v0) / (b - a)
}

/// Thresholds drawn independently and uniformly from each buyer's support.
pub fn random_thresholds<R: Rng + ?Sized>(
    instance: &AuctionInstance,
    rng: &mut R,
) -> ThresholdVector {
    let eta = instance
        .buyers()
        .iter()
        .map(|b| {
            let (lo, hi) = (b.lower(), b.upper());
            (lo + (hi - lo) * rng.random::<f64>()).clamp(lo, hi)
        })
        .collect();
    ThresholdVector::new(instance, eta).expect("draws lie inside each support")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub n_bidders: usize,
    pub analog_utility: Estimate,
    pub binary_optimal_utility: f64,
    pub binary_random_utility: Estimate,
    /// Thresholds behind `binary_optimal_utility`.
    pub binary_optimal_eta: Vec<f64>,
    /// Lowest exact utility among the random draws.
    pub binary_random_min: f64,
    /// Highest exact utility among the random draws.
    pub binary_random_max: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompareOptions {
    pub trials: u64,
    pub threshold_draws: u64,
    pub grid_step: f64,
    pub seed: u64,
}

/// Seller utility versus bidder count for analog, optimally quantized and
/// randomly quantized bids over i.i.d. `Uniform[a, b]` bidders.
///
/// Each row runs from its own seed derived from `(seed, n)`, so a row does not
/// depend on which other bidder counts are in the sweep.
pub fn compare_sweep(
    v0: f64,
    a: f64,
    b: f64,
    n_range: &[usize],
    options: &CompareOptions,
) -> Result<Vec<ComparisonRow>> {
    if n_range.is_empty() {
        return Err(Error::invalid("n_range", "empty"));
    }
    if options.threshold_draws == 0 {
        return Err(Error::invalid("threshold_draws", "need at least one draw"));
    }
    n_range
        .par_iter()
        .map(|&n| compare_row(v0, a, b, n, options))
        .collect()
}

fn compare_row(
    v0: f64,
    a: f64,
    b: f64,
    n: usize,
    options: &CompareOptions,
) -> Result<ComparisonRow> {
    let instance = AuctionInstance::symmetric_uniform(v0, a, b, n)?;
    let row_seed = derive_seed(options.seed, n as u64);

    let search = optimize_symmetric(&instance, options.grid_step)?;
    let analog = myerson_uniform(v0, a, b, n, options.trials, derive_seed(row_seed, 0))?;

    let mut rng = shard_rng(derive_seed(row_seed, 1), 0);
    let mut random = RunningStats::default();
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for _ in 0..options.threshold_draws {
        let eta = random_thresholds(&instance, &mut rng);
        let u = v0 + expected_seller_gain(&instance, &eta);
        random.push(u);
        lo = lo.min(u);
        hi = hi.max(u);
    }

    Ok(ComparisonRow {
        n_bidders: n,
        analog_utility: analog,
        binary_optimal_utility: v0 + search.gain_opt,
        binary_random_utility: random.estimate(),
        binary_optimal_eta: search.eta_opt.into_vec(),
        binary_random_min: lo,
        binary_random_max: hi,
    })
}
