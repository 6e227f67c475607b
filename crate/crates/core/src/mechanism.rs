//! The seller-optimal mechanism for fixed thresholds.
//!
//! Each buyer gets a virtual utility per bit. For a given bid profile the
//! object goes to the buyer with the highest positive virtual utility, ties to
//! the lowest index, and nobody wins when every score is `<= 0`. A winner who
//! sent `0` pays the bottom of their support. A winner who sent `1` pays their
//! threshold, less `(eta_i - a_i)` if they would also have won by sending `0`.
//! Losers pay nothing.
//!
//! With these rules buyer `i`'s interim win probability is nondecreasing in
//! the bit, the interim payments satisfy `P1 = P0 + eta_i (Q1 - Q0)`, and a
//! buyer at `v = a_i` sending `0` is left with exactly zero expected utility.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{
    enumerate_outcomes, lambdas, pmf_excluding, pmf_from_lambdas, AuctionInstance, Bit, Outcome,
    ThresholdVector, MAX_BUYERS,
};

/// A buyer's per-bit score.
///
/// `w0 = lambda * u0` is kept alongside `u0` because it stays finite when
/// `lambda = 0`, where `u0` is `-inf`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VirtualUtility {
    pub lambda: f64,
    pub u0: f64,
    pub u1: f64,
    pub w0: f64,
}

impl VirtualUtility {
    pub fn new(v0: f64, a: f64, eta: f64, lambda: f64) -> Self {
        let u1 = eta - v0;
        let w0 = a - (1.0 - lambda) * eta - lambda * v0;
        // Written as u1 minus a nonnegative term so that u0 <= u1 holds after rounding.
        let u0 = if lambda > 0.0 {
            u1 - (eta - a) / lambda
        } else {
            f64::NEG_INFINITY
        };
        VirtualUtility { lambda, u0, u1, w0 }
    }

    pub fn score(&self, bit: Bit) -> f64 {
        match bit {
            Bit::Zero => self.u0,
            Bit::One => self.u1,
        }
    }

    /// `P(bit) * score(bit)`, finite even when `P(bit) = 0`.
    pub fn weighted_score(&self, bit: Bit) -> f64 {
        match bit {
            Bit::Zero => self.w0,
            Bit::One => (1.0 - self.lambda) * self.u1,
        }
    }
}

pub fn virtual_utilities(instance: &AuctionInstance, eta: &ThresholdVector) -> Vec<VirtualUtility> {
    utilities_for(instance, eta.as_slice())
}

/// Same as [`virtual_utilities`] for a raw slice already known to be in support.
pub(crate) fn utilities_for(instance: &AuctionInstance, eta: &[f64]) -> Vec<VirtualUtility> {
    instance
        .buyers()
        .iter()
        .zip(eta)
        .map(|(buyer, &e)| {
            let lambda = buyer.distribution.cdf(e);
            VirtualUtility::new(instance.v0(), buyer.lower(), e, lambda)
        })
        .collect()
}

/// Winner for a bid profile, or `None` when the seller keeps the object.
pub fn allocate(utilities: &[VirtualUtility], omega: Outcome) -> Option<usize> {
    debug_assert_eq!(utilities.len(), omega.len());
    let mut best: Option<(usize, f64)> = None;
    for (i, u) in utilities.iter().enumerate() {
        let s = u.score(omega.bit(i));
        // Strict comparison keeps the lowest index on ties.
        if s > 0.0 && best.is_none_or(|(_, top)| s > top) {
            best = Some((i, s));
        }
    }
    best.map(|(i, _)| i)
}

/// Whether buyer `i` would still win had they sent `0` against the same opponents.
pub fn counterfactual_win(utilities: &[VirtualUtility], omega: Outcome, i: usize) -> bool {
    allocate(utilities, omega.with_bit(i, Bit::Zero)) == Some(i)
}

/// Payment vector for one bid profile given its winner.
pub fn payments(
    instance: &AuctionInstance,
    eta: &ThresholdVector,
    utilities: &[VirtualUtility],
    omega: Outcome,
    winner: Option<usize>,
) -> Vec<f64> {
    payments_for(instance, eta.as_slice(), utilities, omega, winner)
}

fn payments_for(
    instance: &AuctionInstance,
    eta: &[f64],
    utilities: &[VirtualUtility],
    omega: Outcome,
    winner: Option<usize>,
) -> Vec<f64> {
    let mut out = vec![0.0; instance.len()];
    if let Some(i) = winner {
        let a = instance.buyer(i).lower();
        out[i] = match omega.bit(i) {
            Bit::Zero => a,
            Bit::One => {
                if counterfactual_win(utilities, omega, i) {
                    // eta - (eta - a)
                    a
                } else {
                    eta[i]
                }
            }
        };
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeRow {
    pub winner: Option<usize>,
    pub payments: Vec<f64>,
}

/// Allocation and payments over every bid profile, indexed by outcome code.
#[derive(Debug, Clone, PartialEq)]
pub struct MechanismTable {
    instance: AuctionInstance,
    eta: ThresholdVector,
    utilities: Vec<VirtualUtility>,
    lambdas: Vec<f64>,
    rows: Vec<OutcomeRow>,
}

impl MechanismTable {
    /// Wraps externally supplied rows, e.g. a table read back from disk.
    ///
    /// Only the shape is checked here: one row per outcome, one payment per
    /// buyer, winners in range. Whether the rows form an incentive-compatible
    /// mechanism is for [`crate::verify`] to decide.
    pub fn from_rows(
        instance: AuctionInstance,
        eta: ThresholdVector,
        rows: Vec<OutcomeRow>,
    ) -> Result<Self> {
        let n = instance.len();
        if eta.len() != n {
            return Err(Error::invalid("eta", "length differs from the buyer count"));
        }
        if rows.len() != instance.outcome_count() {
            return Err(Error::invalid(
                "rows",
                format!(
                    "expected {} rows, got {}",
                    instance.outcome_count(),
                    rows.len()
                ),
            ));
        }
        for (code, row) in rows.iter().enumerate() {
            if row.payments.len() != n {
                return Err(Error::invalid(
                    format!("rows[{code}].payments"),
                    format!("expected {n} payments, got {}", row.payments.len()),
                ));
            }
            if row.payments.iter().any(|p| !p.is_finite()) {
                return Err(Error::invalid(
                    format!("rows[{code}].payments"),
                    "non-finite payment",
                ));
            }
            if let Some(w) = row.winner {
                if w >= n {
                    return Err(Error::invalid(
                        format!("rows[{code}].winner"),
                        format!("buyer index {w} out of range"),
                    ));
                }
            }
        }
        let utilities = virtual_utilities(&instance, &eta);
        let lambdas = lambdas(&instance, &eta);
        Ok(MechanismTable {
            instance,
            eta,
            utilities,
            lambdas,
            rows,
        })
    }

    pub fn instance(&self) -> &AuctionInstance {
        &self.instance
    }

    pub fn eta(&self) -> &ThresholdVector {
        &self.eta
    }

    pub fn utilities(&self) -> &[VirtualUtility] {
        &self.utilities
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn rows(&self) -> &[OutcomeRow] {
        &self.rows
    }

    pub fn row(&self, omega: Outcome) -> &OutcomeRow {
        &self.rows[omega.code()]
    }

    pub fn len(&self) -> usize {
        self.instance.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instance.is_empty()
    }

    pub fn winner(&self, omega: Outcome) -> Option<usize> {
        self.rows[omega.code()].winner
    }

    /// `q_i(omega)`, either 0 or 1.
    pub fn allocation(&self, omega: Outcome, i: usize) -> f64 {
        if self.rows[omega.code()].winner == Some(i) {
            1.0
        } else {
            0.0
        }
    }

    pub fn payment(&self, omega: Outcome, i: usize) -> f64 {
        self.rows[omega.code()].payments[i]
    }

    pub fn outcomes(&self) -> impl Iterator<Item = Outcome> {
        enumerate_outcomes(self.len()).expect("instance size already validated")
    }

    pub fn pmf(&self, omega: Outcome) -> f64 {
        pmf_from_lambdas(&self.lambdas, omega)
    }

    /// Seller's expected utility computed from the payments:
    /// `sum_omega [v0 (1 - sum_i q_i) + sum_i p_i] f(omega)`.
    pub fn expected_seller_utility(&self) -> f64 {
        let v0 = self.instance.v0();
        self.outcomes()
            .map(|omega| {
                let row = self.row(omega);
                let kept = if row.winner.is_some() { 0.0 } else { v0 };
                let paid: f64 = row.payments.iter().sum();
                (kept + paid) * self.pmf(omega)
            })
            .sum()
    }

    /// Virtual-surplus objective of this table's allocation,
    /// `sum_omega sum_i u_i(omega_i) q_i(omega) f(omega)`.
    pub fn objective(&self) -> f64 {
        self.outcomes()
            .map(|omega| match self.winner(omega) {
                Some(i) => winner_contribution(&self.utilities, &self.lambdas, omega, i),
                None => 0.0,
            })
            .sum()
    }
}

#[inline]
fn winner_contribution(
    utilities: &[VirtualUtility],
    lambdas: &[f64],
    omega: Outcome,
    i: usize,
) -> f64 {
    utilities[i].weighted_score(omega.bit(i)) * pmf_excluding(lambdas, omega, i)
}

pub fn build_mechanism(
    instance: &AuctionInstance,
    eta: &ThresholdVector,
) -> Result<MechanismTable> {
    let n = instance.len();
    if n > MAX_BUYERS {
        return Err(Error::Capacity(format!(
            "{n} buyers exceeds the table cap of {MAX_BUYERS}"
        )));
    }
    if eta.len() != n {
        return Err(Error::invalid("eta", "length differs from the buyer count"));
    }
    let utilities = virtual_utilities(instance, eta);
    let rows = (0..instance.outcome_count())
        .into_par_iter()
        .map(|code| {
            let omega = Outcome::from_code(code, n).expect("code within range");
            let winner = allocate(&utilities, omega);
            let payments = payments_for(instance, eta.as_slice(), &utilities, omega, winner);
            OutcomeRow { winner, payments }
        })
        .collect();
    Ok(MechanismTable {
        lambdas: lambdas(instance, eta),
        instance: instance.clone(),
        eta: eta.clone(),
        utilities,
        rows,
    })
}

/// Exact optimal objective for the given thresholds.
///
/// Equals the seller's expected utility minus `v0`, because the mechanism
/// leaves a buyer at `v = a_i` sending `0` with zero surplus.
pub fn expected_seller_gain(instance: &AuctionInstance, eta: &ThresholdVector) -> f64 {
    gain_for(instance, eta.as_slice())
}

pub(crate) fn gain_for(instance: &AuctionInstance, eta: &[f64]) -> f64 {
    let utilities = utilities_for(instance, eta);
    let lambdas: Vec<f64> = utilities.iter().map(|u| u.lambda).collect();
    gain_from_utilities(&utilities, &lambdas)
}

fn gain_from_utilities(utilities: &[VirtualUtility], lambdas: &[f64]) -> f64 {
    let n = utilities.len();
    enumerate_outcomes(n)
        .expect("instance size already validated")
        .map(|omega| match allocate(utilities, omega) {
            Some(i) => winner_contribution(utilities, lambdas, omega, i),
            None => 0.0,
        })
        .sum()
}

/// Seller expected utility for the given thresholds, `gain + v0`.
pub fn expected_seller_utility(instance: &AuctionInstance, eta: &ThresholdVector) -> f64 {
    expected_seller_gain(instance, eta) + instance.v0()
}

/// A buyer's win probability and expected payment, conditioned on their own bit
/// and averaged over the other buyers' bits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InterimQuantities {
    pub q0: f64,
    pub q1: f64,
    pub p0: f64,
    pub p1: f64,
}

impl InterimQuantities {
    pub fn win_probability(&self, bit: Bit) -> f64 {
        match bit {
            Bit::Zero => self.q0,
            Bit::One => self.q1,
        }
    }

    pub fn expected_payment(&self, bit: Bit) -> f64 {
        match bit {
            Bit::Zero => self.p0,
            Bit::One => self.p1,
        }
    }

    /// Expected utility of a buyer with value `v` who reports `bit`.
    pub fn utility(&self, v: f64, bit: Bit) -> f64 {
        v * self.win_probability(bit) - self.expected_payment(bit)
    }

    /// `P1 - P0 - eta (Q1 - Q0)`; zero for an incentive-compatible mechanism.
    pub fn payment_identity_residual(&self, eta: f64) -> f64 {
        self.p1 - self.p0 - eta * (self.q1 - self.q0)
    }
}

pub fn interim_quantities(table: &MechanismTable, i: usize) -> InterimQuantities {
    let mut iq = InterimQuantities {
        q0: 0.0,
        q1: 0.0,
        p0: 0.0,
        p1: 0.0,
    };
    let lambdas = table.lambdas();
    // Walk the outcomes with bit i = 0 and pair each with its bit i = 1 twin.
    for omega in table.outcomes().filter(|o| o.bit(i) == Bit::Zero) {
        let weight = pmf_excluding(lambdas, omega, i);
        let twin = omega.with_bit(i, Bit::One);
        iq.q0 += table.allocation(omega, i) * weight;
        iq.p0 += table.payment(omega, i) * weight;
        iq.q1 += table.allocation(twin, i) * weight;
        iq.p1 += table.payment(twin, i) * weight;
    }
    iq
}

pub fn buyer_expected_utility(
    table: &MechanismTable,
    i: usize,
    v: f64,
    reported: Bit,
) -> Result<f64> {
    if i >= table.len() {
        return Err(Error::invalid("buyer", format!("index {i} out of range")));
    }
    let buyer = table.instance().buyer(i);
    if !buyer.distribution.contains(v) {
        return Err(Error::invalid(
            "v",
            format!(
                "value {v} lies outside [{}, {}]",
                buyer.lower(),
                buyer.upper()
            ),
        ));
    }
    Ok(interim_quantities(table, i).utility(v, reported))
}
