//! Choosing quantization thresholds.
//!
//! One buyer has a closed form. With `v0 <= b` and the vertex `(b + v0) / 2`
//! above `a`, the seller posts a threshold at the vertex and earns
//! `(b - v0)^2 / (4 (b - a))`. If the vertex is at or below `a`, every
//! threshold does equally well: the buyer always buys at price `a`, for a gain
//! of `a - v0`. If `v0 > b`, the seller never sells.
//!
//! Several buyers are handled by exact evaluation on a grid. Each point costs
//! one pass over the `2^N` bid profiles.

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::mechanism::gain_for;
use crate::model::{AuctionInstance, ThresholdVector};

/// Grid points whose gain is within this of the best are reported as ties.
pub const TIE_TOLERANCE: f64 = 1e-9;

/// Default cap on `2^N * grid points` for one search.
pub const DEFAULT_EVALUATION_BUDGET: u64 = 100_000_000;

/// Which parameter region a single-buyer problem falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SingleBuyerRegime {
    /// `v0 > b`: the seller keeps the object.
    SellerValueAboveSupport,
    /// `a < v0 <= b`.
    SellerValueInSupport,
    /// `v0 = a`.
    SellerValueAtLowerBound,
    /// `v0 < a < (b + v0) / 2`: an interior threshold screens the buyer.
    ScreeningBelowSupport,
    /// `(b + v0) / 2 <= a`: selling at `a` for sure is optimal.
    AlwaysSell,
}

/// An optimal threshold, or indifference over the whole support.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThresholdChoice {
    Exact(f64),
    Any,
}

impl ThresholdChoice {
    pub fn exact(&self) -> Option<f64> {
        match *self {
            ThresholdChoice::Exact(x) => Some(x),
            ThresholdChoice::Any => None,
        }
    }
}

impl Serialize for ThresholdChoice {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match *self {
            ThresholdChoice::Exact(x) => s.serialize_f64(x),
            ThresholdChoice::Any => s.serialize_str("any"),
        }
    }
}

/// Optimal allocation at one bit: never, always, or either.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AllocationChoice {
    Zero,
    One,
    Any,
}

impl AllocationChoice {
    fn from_coefficient_sign(sign: std::cmp::Ordering) -> Self {
        match sign {
            std::cmp::Ordering::Less => AllocationChoice::Zero,
            std::cmp::Ordering::Equal => AllocationChoice::Any,
            std::cmp::Ordering::Greater => AllocationChoice::One,
        }
    }

    /// Whether allocating `q` is optimal under this choice.
    pub fn admits(&self, q: u8) -> bool {
        match self {
            AllocationChoice::Zero => q == 0,
            AllocationChoice::One => q == 1,
            AllocationChoice::Any => true,
        }
    }
}

impl Serialize for AllocationChoice {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            AllocationChoice::Zero => s.serialize_u8(0),
            AllocationChoice::One => s.serialize_u8(1),
            AllocationChoice::Any => s.serialize_str("any"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SingleBuyerSolution {
    pub regime: SingleBuyerRegime,
    pub eta_opt: ThresholdChoice,
    pub q0_opt: AllocationChoice,
    pub q1_opt: AllocationChoice,
    /// Optimal expected seller utility net of `v0`.
    pub gain_opt: f64,
}

fn check_support(a: f64, b: f64) -> Result<()> {
    if !a.is_finite() || !b.is_finite() || a >= b {
        return Err(Error::invalid(
            "support",
            format!("need finite a < b, got [{a}, {b}]"),
        ));
    }
    Ok(())
}

pub fn single_buyer_regime(v0: f64, a: f64, b: f64) -> SingleBuyerRegime {
    if v0 > b {
        SingleBuyerRegime::SellerValueAboveSupport
    } else if v0 > a {
        SingleBuyerRegime::SellerValueInSupport
    } else if v0 == a {
        SingleBuyerRegime::SellerValueAtLowerBound
    } else if (b + v0) / 2.0 > a {
        SingleBuyerRegime::ScreeningBelowSupport
    } else {
        SingleBuyerRegime::AlwaysSell
    }
}

pub fn single_buyer_optimum(v0: f64, a: f64, b: f64) -> Result<SingleBuyerSolution> {
    check_support(a, b)?;
    if !v0.is_finite() {
        return Err(Error::invalid("v0", "must be finite"));
    }
    let regime = single_buyer_regime(v0, a, b);
    let solution = match regime {
        SingleBuyerRegime::SellerValueAboveSupport => SingleBuyerSolution {
            regime,
            eta_opt: ThresholdChoice::Any,
            q0_opt: AllocationChoice::Zero,
            q1_opt: AllocationChoice::Zero,
            gain_opt: 0.0,
        },
        SingleBuyerRegime::AlwaysSell => SingleBuyerSolution {
            regime,
            eta_opt: ThresholdChoice::Any,
            q0_opt: AllocationChoice::One,
            q1_opt: AllocationChoice::One,
            gain_opt: a - v0,
        },
        _ => {
            let eta = (b + v0) / 2.0;
            let (q0_opt, q1_opt) = classify_single_buyer(v0, a, b, eta)?;
            SingleBuyerSolution {
                regime,
                eta_opt: ThresholdChoice::Exact(eta),
                q0_opt,
                q1_opt,
                gain_opt: (b - v0) * (b - v0) / (4.0 * (b - a)),
            }
        }
    };
    Ok(solution)
}

/// Objective coefficients `(M, N)` of `q(0)` and `q(1)` for one buyer:
/// `M = (eta - a)(eta - b + a - v0) / (b - a)`, `N = (b - eta)(eta - v0) / (b - a)`.
pub fn single_buyer_coefficients(v0: f64, a: f64, b: f64, eta: f64) -> (f64, f64) {
    let width = b - a;
    (
        (eta - a) * (eta - (b - a + v0)) / width,
        (b - eta) * (eta - v0) / width,
    )
}

/// Optimal `(q(0), q(1))` for one buyer at a fixed threshold.
///
/// Decided by the signs of the two coefficients, each found by comparing
/// `eta` against the factor roots rather than by rounding a product.
pub fn classify_single_buyer(
    v0: f64,
    a: f64,
    b: f64,
    eta: f64,
) -> Result<(AllocationChoice, AllocationChoice)> {
    check_support(a, b)?;
    if !v0.is_finite() {
        return Err(Error::invalid("v0", "must be finite"));
    }
    if !(a <= eta && eta <= b) {
        return Err(Error::invalid(
            "eta",
            format!("threshold {eta} lies outside [{a}, {b}]"),
        ));
    }
    use std::cmp::Ordering;
    let product_sign = |x: Ordering, y: Ordering| match (x, y) {
        (Ordering::Equal, _) | (_, Ordering::Equal) => Ordering::Equal,
        (x, y) if x == y => Ordering::Greater,
        _ => Ordering::Less,
    };
    let cmp = |x: f64, y: f64| x.partial_cmp(&y).expect("finite inputs");
    let m = product_sign(cmp(eta, a), cmp(eta, b - a + v0));
    let n = product_sign(cmp(b, eta), cmp(eta, v0));
    Ok((
        AllocationChoice::from_coefficient_sign(m),
        AllocationChoice::from_coefficient_sign(n),
    ))
}

/// Evenly spaced thresholds `start, start + step, ...` up to `stop`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl GridSpec {
    pub fn new(start: f64, stop: f64, step: f64) -> Self {
        GridSpec { start, stop, step }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.start.is_finite() && self.stop.is_finite() && self.step.is_finite()) {
            return Err(Error::invalid("grid", "bounds and step must be finite"));
        }
        if self.step <= 0.0 {
            return Err(Error::invalid(
                "grid.step",
                format!("must be positive, got {}", self.step),
            ));
        }
        if self.stop < self.start {
            return Err(Error::invalid(
                "grid",
                format!("empty grid: stop {} < start {}", self.stop, self.start),
            ));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn point(&self, k: usize) -> f64 {
        (self.start + k as f64 * self.step).min(self.stop)
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len()).map(|k| self.point(k)).collect()
    }
}

/// One grid per buyer spanning the buyer's whole support.
pub fn support_grids(instance: &AuctionInstance, step: f64) -> Vec<GridSpec> {
    instance
        .buyers()
        .iter()
        .map(|b| GridSpec::new(b.lower(), b.upper(), step))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurfacePoint {
    pub eta: Vec<f64>,
    pub gain: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridSearchResult {
    /// Lexicographically lowest point among the ties.
    pub eta_opt: ThresholdVector,
    /// Largest gain on the grid.
    pub gain_opt: f64,
    /// Every evaluated point, lexicographic order with buyer 0 slowest.
    pub surface: Vec<SurfacePoint>,
    /// Points within [`TIE_TOLERANCE`] of `gain_opt`, in surface order.
    pub ties: Vec<Vec<f64>>,
}

pub fn grid_search(instance: &AuctionInstance, grids: &[GridSpec]) -> Result<GridSearchResult> {
    grid_search_with_budget(instance, grids, DEFAULT_EVALUATION_BUDGET)
}

fn check_grids(instance: &AuctionInstance, grids: &[GridSpec]) -> Result<()> {
    if grids.len() != instance.len() {
        return Err(Error::invalid(
            "grid",
            format!("expected {} grids, got {}", instance.len(), grids.len()),
        ));
    }
    for (i, (g, buyer)) in grids.iter().zip(instance.buyers()).enumerate() {
        g.validate().map_err(|e| match e {
            Error::Invalid { field, reason } => {
                Error::invalid(field.replacen("grid", &format!("grid[{i}]"), 1), reason)
            }
            other => other,
        })?;
        if g.start < buyer.lower() || g.stop > buyer.upper() {
            return Err(Error::invalid(
                format!("grid[{i}]"),
                format!(
                    "[{}, {}] leaves the support [{}, {}]",
                    g.start,
                    g.stop,
                    buyer.lower(),
                    buyer.upper()
                ),
            ));
        }
    }
    Ok(())
}

fn check_budget(evaluations: u128, budget: u64) -> Result<()> {
    if evaluations > budget as u128 {
        return Err(Error::Capacity(format!(
            "search needs {evaluations} outcome evaluations, budget is {budget}"
        )));
    }
    Ok(())
}

pub fn grid_search_with_budget(
    instance: &AuctionInstance,
    grids: &[GridSpec],
    budget: u64,
) -> Result<GridSearchResult> {
    check_grids(instance, grids)?;
    let axes: Vec<Vec<f64>> = grids.iter().map(GridSpec::points).collect();
    let total = axes
        .iter()
        .try_fold(1u128, |acc, axis| acc.checked_mul(axis.len() as u128))
        .unwrap_or(u128::MAX);
    check_budget(
        total.saturating_mul(instance.outcome_count() as u128),
        budget,
    )?;
    let total = total as usize;

    let surface: Vec<SurfacePoint> = (0..total)
        .into_par_iter()
        .map(|k| {
            let eta = grid_point(&axes, k);
            let gain = gain_for(instance, &eta);
            SurfacePoint { eta, gain }
        })
        .collect();

    let gain_opt = surface
        .iter()
        .map(|p| p.gain)
        .fold(f64::NEG_INFINITY, f64::max);
    let ties: Vec<Vec<f64>> = surface
        .iter()
        .filter(|p| p.gain >= gain_opt - TIE_TOLERANCE)
        .map(|p| p.eta.clone())
        .collect();
    let eta_opt = ThresholdVector::new(instance, ties[0].clone())?;
    Ok(GridSearchResult {
        eta_opt,
        gain_opt,
        surface,
        ties,
    })
}

/// Multi-index `k` decoded with the first axis most significant.
fn grid_point(axes: &[Vec<f64>], mut k: usize) -> Vec<f64> {
    let mut eta = vec![0.0; axes.len()];
    for (slot, axis) in eta.iter_mut().zip(axes).rev() {
        *slot = axis[k % axis.len()];
        k /= axis.len();
    }
    eta
}

/// Result of a symmetric-then-coordinatewise threshold search.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetricSearch {
    pub eta_opt: ThresholdVector,
    pub gain_opt: f64,
    /// Best common threshold and its gain, before per-buyer refinement.
    pub shared_eta: f64,
    pub shared_gain: f64,
    /// Whether the refined optimum still has all thresholds equal.
    pub symmetric: bool,
    pub passes: usize,
}

const MAX_REFINEMENT_PASSES: usize = 64;
const IMPROVEMENT_TOLERANCE: f64 = 1e-12;

/// Threshold search for buyers who share one value law.
///
/// Scans a common threshold first, then improves one buyer at a time on the
/// same grid until a full pass changes nothing. The optimum is not assumed
/// to be symmetric; [`SymmetricSearch::symmetric`] reports whether it is.
pub fn optimize_symmetric(instance: &AuctionInstance, step: f64) -> Result<SymmetricSearch> {
    let first = instance.buyer(0);
    if instance.buyers().iter().any(|b| b != first) {
        return Err(Error::invalid(
            "buyers",
            "symmetric search needs every buyer to share one distribution",
        ));
    }
    let grid = GridSpec::new(first.lower(), first.upper(), step);
    grid.validate()?;
    let axis = grid.points();
    let n = instance.len();
    check_budget(
        (axis.len() as u128) * (n as u128) * (instance.outcome_count() as u128),
        DEFAULT_EVALUATION_BUDGET,
    )?;

    let shared: Vec<f64> = axis
        .par_iter()
        .map(|&e| gain_for(instance, &vec![e; n]))
        .collect();
    let (best_k, shared_gain) = argmax_first(&shared);
    let shared_eta = axis[best_k];

    let mut eta = vec![shared_eta; n];
    let mut gain = shared_gain;
    let mut passes = 0;
    while passes < MAX_REFINEMENT_PASSES {
        passes += 1;
        let mut improved = false;
        for i in 0..n {
            let candidates: Vec<f64> = axis
                .par_iter()
                .map(|&e| {
                    let mut trial = eta.clone();
                    trial[i] = e;
                    gain_for(instance, &trial)
                })
                .collect();
            let (k, g) = argmax_first(&candidates);
            if g > gain + IMPROVEMENT_TOLERANCE {
                eta[i] = axis[k];
                gain = g;
                improved = true;
            }
        }
        if !improved {
            break;
        }
    }

    let symmetric = eta.iter().all(|&e| (e - eta[0]).abs() <= TIE_TOLERANCE);
    Ok(SymmetricSearch {
        eta_opt: ThresholdVector::new(instance, eta)?,
        gain_opt: gain,
        shared_eta,
        shared_gain,
        symmetric,
        passes,
    })
}

fn argmax_first(values: &[f64]) -> (usize, f64) {
    values
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (k, v)| {
            if v > best.1 {
                (k, v)
            } else {
                best
            }
        })
}
