//! Independent checks on a mechanism table.
//!
//! None of these reuse the winner-selection code in [`crate::mechanism`].
//! The allocation oracle scores every pure allocation per bid profile from
//! scratch. The interim and deviation checks look only at the table's rows.
//! The simulator draws analog values and reads the table.
//!
//! The deviation suite evaluates each buyer on a value grid that includes both
//! support ends and the threshold itself. A lie changes utility by an affine
//! function of `v` on each side of the threshold, so the endpoint and
//! threshold evaluations already settle incentive compatibility; the interior
//! grid points add coverage only.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mechanism::{interim_quantities, InterimQuantities, MechanismTable};
use crate::model::{enumerate_outcomes, quantize, AuctionInstance, Bit, Outcome, ThresholdVector};
use crate::stats::{run_sharded, Estimate, RunningStats, DEFAULT_SHARDS};

/// Largest instance the exhaustive allocation oracle accepts.
pub const ORACLE_MAX_BUYERS: usize = 6;

pub const PAYMENT_IDENTITY_TOLERANCE: f64 = 1e-9;
pub const DEVIATION_TOLERANCE: f64 = 1e-12;
pub const ORACLE_TOLERANCE: f64 = 1e-12;

/// Per-profile optimum of the virtual-surplus objective over pure allocations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleSolution {
    pub gain: f64,
    /// For each outcome code, every optimal choice (`None` = keep the object).
    pub optimal_choices: Vec<Vec<Option<usize>>>,
}

/// Exhaustive allocation oracle.
///
/// The objective is a sum of independent per-profile terms and each profile's
/// feasible allocations form a simplex whose vertices are "buyer `i` wins" and
/// "no sale", so trying those `N + 1` vertices per profile yields the LP
/// optimum.
pub fn allocation_oracle(
    instance: &AuctionInstance,
    eta: &ThresholdVector,
) -> Result<OracleSolution> {
    let coefficients = profile_coefficients(instance, eta)?;
    let mut gain = 0.0;
    let mut optimal_choices = Vec::with_capacity(coefficients.len());
    for row in &coefficients {
        let best = row.iter().copied().fold(0.0f64, f64::max);
        let mut choices = Vec::new();
        if best <= ORACLE_TOLERANCE {
            choices.push(None);
        }
        choices.extend(
            row.iter()
                .enumerate()
                .filter(|&(_, &c)| c >= best - ORACLE_TOLERANCE)
                .map(|(i, _)| Some(i)),
        );
        gain += best;
        optimal_choices.push(choices);
    }
    Ok(OracleSolution {
        gain,
        optimal_choices,
    })
}

/// `c[omega][i] = u_i(omega_i) f(omega)`, straight from the definitions.
fn profile_coefficients(
    instance: &AuctionInstance,
    eta: &ThresholdVector,
) -> Result<Vec<Vec<f64>>> {
    let n = instance.len();
    if n > ORACLE_MAX_BUYERS {
        return Err(Error::Capacity(format!(
            "oracle is exhaustive and limited to {ORACLE_MAX_BUYERS} buyers, got {n}"
        )));
    }
    let v0 = instance.v0();
    let lam: Vec<f64> = instance
        .buyers()
        .iter()
        .zip(eta.as_slice())
        .map(|(b, &e)| (e - b.lower()) / (b.upper() - b.lower()))
        .collect();
    let coefficients = enumerate_outcomes(n)?
        .map(|omega| {
            let mut pmf = 1.0;
            for (i, &l) in lam.iter().enumerate() {
                pmf *= if omega.bit(i) == Bit::Zero {
                    l
                } else {
                    1.0 - l
                };
            }
            (0..n)
                .map(|i| {
                    if pmf == 0.0 {
                        return 0.0;
                    }
                    let a = instance.buyer(i).lower();
                    let e = eta.get(i);
                    let u = match omega.bit(i) {
                        Bit::Zero => (a - (1.0 - lam[i]) * e) / lam[i] - v0,
                        Bit::One => e - v0,
                    };
                    u * pmf
                })
                .collect()
        })
        .collect();
    Ok(coefficients)
}

/// Largest amount by which random fractional allocations beat the oracle.
///
/// Each draw picks, per bid profile, a uniform point on the simplex over
/// "buyer 1 .. buyer N, no sale". A nonpositive result means no draw beat the
/// integral optimum.
pub fn fractional_refuter<R: Rng + ?Sized>(
    instance: &AuctionInstance,
    eta: &ThresholdVector,
    draws: usize,
    rng: &mut R,
) -> Result<f64> {
    let coefficients = profile_coefficients(instance, eta)?;
    let oracle: f64 = coefficients
        .iter()
        .map(|row| row.iter().copied().fold(0.0f64, f64::max))
        .sum();
    let n = instance.len();
    let mut weights = vec![0.0; n + 1];
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..draws {
        let mut objective = 0.0;
        for row in &coefficients {
            // exponential spacings normalize to a uniform simplex point
            for w in weights.iter_mut() {
                *w = -(1.0 - rng.random::<f64>()).ln();
            }
            let total: f64 = weights.iter().sum();
            objective += row
                .iter()
                .zip(&weights)
                .map(|(c, w)| c * w / total)
                .sum::<f64>();
        }
        worst = worst.max(objective - oracle);
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InterimCheck {
    /// `max_i |P1 - P0 - eta_i (Q1 - Q0)|`.
    pub max_payment_residual: f64,
    /// `min_i (Q1 - Q0)`.
    pub min_win_probability_gap: f64,
    pub interim: Vec<InterimQuantities>,
}

/// Interim win-probability monotonicity and the payment identity for every buyer.
pub fn check_interim(table: &MechanismTable) -> InterimCheck {
    let interim: Vec<InterimQuantities> = (0..table.len())
        .map(|i| interim_quantities(table, i))
        .collect();
    let max_payment_residual = interim
        .iter()
        .enumerate()
        .map(|(i, iq)| iq.payment_identity_residual(table.eta().get(i)).abs())
        .fold(0.0, f64::max);
    let min_win_probability_gap = interim
        .iter()
        .map(|iq| iq.q1 - iq.q0)
        .fold(f64::INFINITY, f64::min);
    InterimCheck {
        max_payment_residual,
        min_win_probability_gap,
        interim,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeviationCheck {
    /// Largest expected gain from flipping the truthful bit; `<= 0` when truthful.
    pub ic_deviation_max: f64,
    /// Smallest truthful expected utility; `>= 0` when participation is rational.
    pub ir_min_utility: f64,
    /// `max_i |U_i(v = a_i, bit 0)|`.
    pub lower_bound_utility_max: f64,
    /// `max_i |U_i(eta_i, 0) - U_i(eta_i, 1)|`.
    pub threshold_indifference_max: f64,
}

/// Values tested for buyer `i`: `grid_points` evenly spaced over the support, plus the threshold.
pub fn deviation_grid(a: f64, b: f64, eta: f64, grid_points: usize) -> Vec<f64> {
    let last = grid_points - 1;
    let mut values: Vec<f64> = (0..grid_points)
        .map(|k| {
            if k == last {
                b
            } else {
                a + (b - a) * k as f64 / last as f64
            }
        })
        .collect();
    values.push(eta);
    values
}

pub fn check_deviations(table: &MechanismTable, grid_points: usize) -> Result<DeviationCheck> {
    if grid_points < 3 {
        return Err(Error::invalid(
            "grid_points",
            format!("need at least 3, got {grid_points}"),
        ));
    }
    let mut out = DeviationCheck {
        ic_deviation_max: f64::NEG_INFINITY,
        ir_min_utility: f64::INFINITY,
        lower_bound_utility_max: 0.0,
        threshold_indifference_max: 0.0,
    };
    for i in 0..table.len() {
        let iq = interim_quantities(table, i);
        let buyer = table.instance().buyer(i);
        let (a, b) = (buyer.lower(), buyer.upper());
        let eta = table.eta().get(i);
        for v in deviation_grid(a, b, eta, grid_points) {
            let truthful = quantize(v, eta, a, b)?;
            let honest = iq.utility(v, truthful);
            let lie = iq.utility(v, truthful.flip());
            out.ic_deviation_max = out.ic_deviation_max.max(lie - honest);
            out.ir_min_utility = out.ir_min_utility.min(honest);
        }
        out.lower_bound_utility_max = out
            .lower_bound_utility_max
            .max(iq.utility(a, Bit::Zero).abs());
        out.threshold_indifference_max = out
            .threshold_indifference_max
            .max((iq.utility(eta, Bit::Zero) - iq.utility(eta, Bit::One)).abs());
    }
    Ok(out)
}

/// Largest payment charged to a buyer who did not win.
pub fn max_loser_payment(table: &MechanismTable) -> f64 {
    table
        .rows()
        .iter()
        .flat_map(|row| {
            row.payments
                .iter()
                .enumerate()
                .filter(move |&(i, _)| row.winner != Some(i))
                .map(|(_, p)| p.abs())
        })
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    /// Nonnegative violation measure; zero means the property holds exactly.
    pub violation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckResult {
    fn new(name: &str, violation: f64, tolerance: f64) -> Self {
        CheckResult {
            name: name.to_string(),
            violation,
            tolerance,
            passed: violation <= tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub payment_identity_max_residual: f64,
    pub min_win_probability_gap: f64,
    pub ic_deviation_max: f64,
    pub ir_min_utility: f64,
    pub lower_bound_utility_max: f64,
    pub threshold_indifference_max: f64,
    pub max_loser_payment: f64,
    /// Table objective minus oracle optimum; absent above [`ORACLE_MAX_BUYERS`].
    pub oracle_gap: Option<f64>,
    pub refuter_excess: Option<f64>,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub grid_points: usize,
    pub refuter_draws: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            grid_points: 101,
            refuter_draws: 1000,
            seed: 0,
        }
    }
}

pub fn verify_table(table: &MechanismTable, options: &VerifyOptions) -> Result<VerificationReport> {
    let interim_check = check_interim(table);
    let deviations = check_deviations(table, options.grid_points)?;
    let loser = max_loser_payment(table);

    let (oracle_gap, refuter_excess) = if table.len() <= ORACLE_MAX_BUYERS {
        let oracle = allocation_oracle(table.instance(), table.eta())?;
        let mut rng = crate::stats::shard_rng(options.seed, 0);
        let excess = if options.refuter_draws > 0 {
            Some(fractional_refuter(
                table.instance(),
                table.eta(),
                options.refuter_draws,
                &mut rng,
            )?)
        } else {
            None
        };
        (Some(table.objective() - oracle.gain), excess)
    } else {
        (None, None)
    };

    let mut checks = vec![
        CheckResult::new(
            "interim_monotonicity",
            (-interim_check.min_win_probability_gap).max(0.0),
            0.0,
        ),
        CheckResult::new(
            "payment_identity",
            interim_check.max_payment_residual,
            PAYMENT_IDENTITY_TOLERANCE,
        ),
        CheckResult::new(
            "incentive_compatibility",
            deviations.ic_deviation_max.max(0.0),
            DEVIATION_TOLERANCE,
        ),
        CheckResult::new(
            "individual_rationality",
            (-deviations.ir_min_utility).max(0.0),
            DEVIATION_TOLERANCE,
        ),
        CheckResult::new(
            "binding_participation_at_lower_bound",
            deviations.lower_bound_utility_max,
            DEVIATION_TOLERANCE,
        ),
        CheckResult::new(
            "threshold_indifference",
            deviations.threshold_indifference_max,
            DEVIATION_TOLERANCE,
        ),
        CheckResult::new("loser_payments", loser, 0.0),
    ];
    if let Some(gap) = oracle_gap {
        checks.push(CheckResult::new(
            "oracle_optimality",
            gap.abs(),
            ORACLE_TOLERANCE,
        ));
    }
    if let Some(excess) = refuter_excess {
        checks.push(CheckResult::new(
            "fractional_refuter",
            excess.max(0.0),
            ORACLE_TOLERANCE,
        ));
    }
    let passed = checks.iter().all(|c| c.passed);

    Ok(VerificationReport {
        payment_identity_max_residual: interim_check.max_payment_residual,
        min_win_probability_gap: interim_check.min_win_probability_gap,
        ic_deviation_max: deviations.ic_deviation_max,
        ir_min_utility: deviations.ir_min_utility,
        lower_bound_utility_max: deviations.lower_bound_utility_max,
        threshold_indifference_max: deviations.threshold_indifference_max,
        max_loser_payment: loser,
        oracle_gap,
        refuter_excess,
        checks,
        passed,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationSummary {
    pub trials: u64,
    pub seed: u64,
    pub shards: usize,
    pub seller_utility: Estimate,
    pub buyer_utilities: Vec<Estimate>,
    pub winner_frequencies: Vec<f64>,
    pub no_sale_frequency: f64,
}

impl SimulationSummary {
    /// Binomial standard error of buyer `i`'s win frequency.
    pub fn winner_frequency_se(&self, i: usize) -> f64 {
        let p = self.winner_frequencies[i];
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }
}

#[derive(Clone)]
struct ShardTally {
    seller: RunningStats,
    buyers: Vec<RunningStats>,
    wins: Vec<u64>,
    no_sale: u64,
}

/// Plays the auction `trials` times with freshly drawn values.
///
/// Deterministic for a fixed `(seed, shards)`, independent of thread count.
pub fn monte_carlo(table: &MechanismTable, trials: u64, seed: u64) -> Result<SimulationSummary> {
    monte_carlo_sharded(table, trials, seed, DEFAULT_SHARDS)
}

pub fn monte_carlo_sharded(
    table: &MechanismTable,
    trials: u64,
    seed: u64,
    shards: usize,
) -> Result<SimulationSummary> {
    if trials == 0 {
        return Err(Error::invalid("trials", "need at least one trial"));
    }
    let n = table.len();
    let instance = table.instance();
    let eta = table.eta().as_slice();
    let v0 = instance.v0();

    let tallies = run_sharded(trials, shards, seed, |rng, count| {
        let mut tally = ShardTally {
            seller: RunningStats::default(),
            buyers: vec![RunningStats::default(); n],
            wins: vec![0; n],
            no_sale: 0,
        };
        let mut values = vec![0.0; n];
        for _ in 0..count {
            let mut code = 0usize;
            for (i, buyer) in instance.buyers().iter().enumerate() {
                let v = buyer.distribution.sample(rng);
                values[i] = v;
                if v > eta[i] {
                    code |= 1 << i;
                }
            }
            let row = &table.rows()[code];
            let paid: f64 = row.payments.iter().sum();
            match row.winner {
                Some(w) => {
                    tally.wins[w] += 1;
                    tally.seller.push(paid);
                }
                None => {
                    tally.no_sale += 1;
                    tally.seller.push(v0 + paid);
                }
            }
            for (i, (stats, &v)) in tally.buyers.iter_mut().zip(&values).enumerate() {
                let won = if row.winner == Some(i) { v } else { 0.0 };
                stats.push(won - row.payments[i]);
            }
        }
        tally
    });

    let mut total = ShardTally {
        seller: RunningStats::default(),
        buyers: vec![RunningStats::default(); n],
        wins: vec![0; n],
        no_sale: 0,
    };
    for t in &tallies {
        total.seller.merge(&t.seller);
        for i in 0..n {
            total.buyers[i].merge(&t.buyers[i]);
            total.wins[i] += t.wins[i];
        }
        total.no_sale += t.no_sale;
    }
    let freq = |count: u64| count as f64 / trials as f64;
    Ok(SimulationSummary {
        trials,
        seed,
        shards,
        seller_utility: total.seller.estimate(),
        buyer_utilities: total.buyers.iter().map(RunningStats::estimate).collect(),
        winner_frequencies: total.wins.iter().map(|&w| freq(w)).collect(),
        no_sale_frequency: freq(total.no_sale),
    })
}

/// Exact probability that buyer `i` wins under the table's allocation.
pub fn win_probability(table: &MechanismTable, i: usize) -> f64 {
    table
        .outcomes()
        .filter(|&o: &Outcome| table.winner(o) == Some(i))
        .map(|o| table.pmf(o))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mechanism::{build_mechanism, expected_seller_gain, OutcomeRow};
    use crate::model::BuyerSpec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn disjoint() -> (AuctionInstance, ThresholdVector) {
        let instance = AuctionInstance::new(
            10.0,
            vec![
                BuyerSpec::uniform(2.0, 8.0).unwrap(),
                BuyerSpec::uniform(12.0, 20.0).unwrap(),
            ],
        )
        .unwrap();
        let eta = ThresholdVector::new(&instance, vec![5.0, 15.0]).unwrap();
        (instance, eta)
    }

    #[test]
    fn oracle_on_disjoint() {
        let (instance, eta) = disjoint();
        let oracle = allocation_oracle(&instance, &eta).unwrap();
        assert!((oracle.gain - 3.125).abs() < 1e-12);
        assert!((oracle.gain - expected_seller_gain(&instance, &eta)).abs() < 1e-12);
        assert_eq!(oracle.optimal_choices[0], vec![None]);
        assert_eq!(oracle.optimal_choices[3], vec![Some(1)]);
    }

    #[test]
    fn oracle_keeps_object_when_scores_negative() {
        let instance =
            AuctionInstance::new(50.0, vec![BuyerSpec::uniform(1.0, 3.0).unwrap(); 3]).unwrap();
        let eta = ThresholdVector::new(&instance, vec![2.0; 3]).unwrap();
        let oracle = allocation_oracle(&instance, &eta).unwrap();
        assert_eq!(oracle.gain, 0.0);
        assert!(oracle.optimal_choices.iter().all(|c| c == &vec![None]));
    }

    #[test]
    fn oracle_single_buyer_reduces_to_two_terms() {
        let (v0, a, b, e) = (3.0, 4.0, 9.0, 7.0);
        let instance = AuctionInstance::new(v0, vec![BuyerSpec::uniform(a, b).unwrap()]).unwrap();
        let eta = ThresholdVector::new(&instance, vec![e]).unwrap();
        let (m, n) = crate::thresholds::single_buyer_coefficients(v0, a, b, e);
        let oracle = allocation_oracle(&instance, &eta).unwrap();
        assert!((oracle.gain - (m.max(0.0) + n.max(0.0))).abs() < 1e-12);
    }

    #[test]
    fn oracle_cap() {
        let instance =
            AuctionInstance::symmetric_uniform(0.0, 0.0, 1.0, ORACLE_MAX_BUYERS + 1).unwrap();
        let eta = ThresholdVector::new(&instance, vec![0.5; ORACLE_MAX_BUYERS + 1]).unwrap();
        assert!(matches!(
            allocation_oracle(&instance, &eta),
            Err(Error::Capacity(_))
        ));
    }

    #[test]
    fn built_tables_pass() {
        let (instance, eta) = disjoint();
        let table = build_mechanism(&instance, &eta).unwrap();
        let report = verify_table(&table, &VerifyOptions::default()).unwrap();
        assert!(report.passed, "{report:?}");
        assert!(report.ic_deviation_max <= 1e-12);
        assert!(report.ir_min_utility >= -1e-12);
    }

    #[test]
    fn always_sell_table_has_zero_residual() {
        let instance =
            AuctionInstance::new(0.0, vec![BuyerSpec::uniform(6.0, 8.0).unwrap()]).unwrap();
        let eta = ThresholdVector::new(&instance, vec![7.0]).unwrap();
        let table = build_mechanism(&instance, &eta).unwrap();
        let l1 = check_interim(&table);
        let iq = l1.interim[0];
        assert_eq!((iq.q0, iq.q1, iq.p0, iq.p1), (1.0, 1.0, 6.0, 6.0));
        assert_eq!(l1.max_payment_residual, 0.0);
    }

    #[test]
    fn overcharging_is_detected() {
        let (instance, eta) = disjoint();
        let table = build_mechanism(&instance, &eta).unwrap();
        let mut rows = table.rows().to_vec();
        // (0,1) is won by buyer 1; opponents' bit has probability lambda_1 = 0.5
        rows[2].payments[1] += 1.0;
        let tampered = MechanismTable::from_rows(instance, eta, rows).unwrap();
        let l1 = check_interim(&tampered);
        assert!(l1.max_payment_residual >= 0.5 - 1e-12);
        let report = verify_table(&tampered, &VerifyOptions::default()).unwrap();
        assert!(!report.passed);
    }

    #[test]
    fn loser_charge_is_detected() {
        let (instance, eta) = disjoint();
        let table = build_mechanism(&instance, &eta).unwrap();
        let mut rows = table.rows().to_vec();
        rows[0] = OutcomeRow {
            winner: None,
            payments: vec![0.25, 0.0],
        };
        let tampered = MechanismTable::from_rows(instance, eta, rows).unwrap();
        assert_eq!(max_loser_payment(&tampered), 0.25);
        assert!(
            !verify_table(&tampered, &VerifyOptions::default())
                .unwrap()
                .passed
        );
    }

    #[test]
    fn deviation_edges() {
        let (instance, eta) = disjoint();
        let table = build_mechanism(&instance, &eta).unwrap();
        let d = check_deviations(&table, 101).unwrap();
        assert!(d.lower_bound_utility_max < 1e-12);
        assert!(d.threshold_indifference_max < 1e-12);
        assert!(check_deviations(&table, 2).is_err());
        let grid = deviation_grid(2.0, 8.0, 5.0, 4);
        assert_eq!(grid, vec![2.0, 4.0, 6.0, 8.0, 5.0]);
    }

    #[test]
    fn refuter_never_beats_integral_optimum() {
        let instance = AuctionInstance::new(
            10.0,
            vec![
                BuyerSpec::uniform(5.0, 15.0).unwrap(),
                BuyerSpec::uniform(8.0, 20.0).unwrap(),
            ],
        )
        .unwrap();
        let eta = ThresholdVector::new(&instance, vec![13.0, 15.0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let excess = fractional_refuter(&instance, &eta, 1000, &mut rng).unwrap();
        assert!(excess <= 1e-12);
        assert!(excess < 0.0);
    }

    #[test]
    fn simulation_matches_exact_values() {
        let (instance, eta) = disjoint();
        let table = build_mechanism(&instance, &eta).unwrap();
        let summary = monte_carlo(&table, 200_000, 9).unwrap();
        assert!(summary.seller_utility.within(13.125, 4.0));
        let p1 = win_probability(&table, 1);
        assert!((p1 - 0.625).abs() < 1e-12);
        assert!((summary.winner_frequencies[1] - p1).abs() <= 4.0 * summary.winner_frequency_se(1));
        let total: f64 = summary.winner_frequencies.iter().sum::<f64>() + summary.no_sale_frequency;
        assert!((total - 1.0).abs() < 1e-12);

        // ex-ante buyer utility: Q1 * integral of v over (eta, b] minus (1 - lambda) P1
        let iq = interim_quantities(&table, 1);
        let (a, b, e) = (12.0, 20.0, 15.0);
        let lam = (e - a) / (b - a);
        let exact = iq.q0 * (e * e - a * a) / (2.0 * (b - a))
            + iq.q1 * (b * b - e * e) / (2.0 * (b - a))
            - lam * iq.p0
            - (1.0 - lam) * iq.p1;
        assert!(summary.buyer_utilities[1].within(exact, 4.0));
        assert_eq!(summary.buyer_utilities[0].mean, 0.0);
    }

    #[test]
    fn simulation_is_deterministic() {
        let (instance, eta) = disjoint();
        let table = build_mechanism(&instance, &eta).unwrap();
        let a = monte_carlo(&table, 10_000, 5).unwrap();
        let b = monte_carlo(&table, 10_000, 5).unwrap();
        assert_eq!(a, b);
        assert!(monte_carlo(&table, 0, 5).is_err());
    }
}
