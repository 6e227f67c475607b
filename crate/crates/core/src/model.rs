//! Auction instances, value laws, binary quantization and the bid-outcome space.
//!
//! Every buyer holds a private value drawn from a law on a finite support
//! `[a, b]`. Before bidding, the value is reduced to one bit against the
//! buyer's threshold `eta`: values in `[a, eta]` send `0`, values in
//! `(eta, b]` send `1`. The seller only ever sees the resulting
//! [`Outcome`], one bit per buyer.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported number of buyers. Mechanism tables hold `2^n` rows.
pub const MAX_BUYERS: usize = 20;

/// A buyer's private-value law.
///
/// Only the uniform family ships today. Everything downstream of this type
/// consumes the support and the CDF at the threshold, so other families plug
/// in by adding a variant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
#[non_exhaustive]
pub enum ValueDistribution {
    Uniform { a: f64, b: f64 },
}

impl ValueDistribution {
    pub fn uniform(a: f64, b: f64) -> Result<Self> {
        let dist = ValueDistribution::Uniform { a, b };
        dist.validate()?;
        Ok(dist)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            ValueDistribution::Uniform { a, b } => {
                if !a.is_finite() || !b.is_finite() {
                    return Err(Error::invalid(
                        "support",
                        format!("bounds must be finite, got [{a}, {b}]"),
                    ));
                }
                if a >= b {
                    return Err(Error::invalid(
                        "support",
                        format!("uniform support needs a < b, got [{a}, {b}]"),
                    ));
                }
                Ok(())
            }
        }
    }

    pub fn lower(&self) -> f64 {
        match *self {
            ValueDistribution::Uniform { a, .. } => a,
        }
    }

    pub fn upper(&self) -> f64 {
        match *self {
            ValueDistribution::Uniform { b, .. } => b,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower() <= x && x <= self.upper()
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match *self {
            ValueDistribution::Uniform { a, b } => {
                if x <= a {
                    0.0
                } else if x >= b {
                    1.0
                } else {
                    (x - a) / (b - a)
                }
            }
        }
    }

    pub fn pdf(&self, x: f64) -> f64 {
        match *self {
            ValueDistribution::Uniform { a, b } => {
                if (a..=b).contains(&x) {
                    1.0 / (b - a)
                } else {
                    0.0
                }
            }
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            ValueDistribution::Uniform { a, b } => a + (b - a) * rng.random::<f64>(),
        }
    }
}

/// One bidder. Serialized as its distribution directly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BuyerSpec {
    pub distribution: ValueDistribution,
}

impl BuyerSpec {
    pub fn uniform(a: f64, b: f64) -> Result<Self> {
        Ok(BuyerSpec {
            distribution: ValueDistribution::uniform(a, b)?,
        })
    }

    pub fn lower(&self) -> f64 {
        self.distribution.lower()
    }

    pub fn upper(&self) -> f64 {
        self.distribution.upper()
    }
}

/// The seller's own value plus the ordered list of buyers.
///
/// Buyer order is significant: indices are stable and lower indices win ties.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawInstance")]
pub struct AuctionInstance {
    v0: f64,
    buyers: Vec<BuyerSpec>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    v0: f64,
    buyers: Vec<BuyerSpec>,
}

impl TryFrom<RawInstance> for AuctionInstance {
    type Error = Error;

    fn try_from(raw: RawInstance) -> Result<Self> {
        AuctionInstance::new(raw.v0, raw.buyers)
    }
}

impl AuctionInstance {
    pub fn new(v0: f64, buyers: Vec<BuyerSpec>) -> Result<Self> {
        if !v0.is_finite() {
            return Err(Error::invalid("v0", format!("must be finite, got {v0}")));
        }
        if buyers.is_empty() {
            return Err(Error::invalid("buyers", "at least one buyer is required"));
        }
        if buyers.len() > MAX_BUYERS {
            return Err(Error::Capacity(format!(
                "{} buyers requested, at most {MAX_BUYERS} are supported",
                buyers.len()
            )));
        }
        for (i, buyer) in buyers.iter().enumerate() {
            buyer.distribution.validate().map_err(|e| match e {
                Error::Invalid { reason, .. } => Error::invalid(format!("buyers[{i}]"), reason),
                other => other,
            })?;
        }
        Ok(AuctionInstance { v0, buyers })
    }

    /// `n` buyers sharing the uniform law on `[a, b]`.
    pub fn symmetric_uniform(v0: f64, a: f64, b: f64, n: usize) -> Result<Self> {
        let buyer = BuyerSpec::uniform(a, b)?;
        AuctionInstance::new(v0, vec![buyer; n])
    }

    pub fn v0(&self) -> f64 {
        self.v0
    }

    pub fn buyers(&self) -> &[BuyerSpec] {
        &self.buyers
    }

    pub fn buyer(&self, i: usize) -> &BuyerSpec {
        &self.buyers[i]
    }

    pub fn len(&self) -> usize {
        self.buyers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.buyers.is_empty()
    }

    pub fn outcome_count(&self) -> usize {
        1 << self.buyers.len()
    }
}

/// Per-buyer quantization thresholds, validated against an instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ThresholdVector {
    eta: Vec<f64>,
}

impl ThresholdVector {
    /// Checks `a_i <= eta_i <= b_i` for every buyer.
    pub fn new(instance: &AuctionInstance, eta: Vec<f64>) -> Result<Self> {
        if eta.len() != instance.len() {
            return Err(Error::invalid(
                "eta",
                format!("expected {} thresholds, got {}", instance.len(), eta.len()),
            ));
        }
        for (i, (&e, buyer)) in eta.iter().zip(instance.buyers()).enumerate() {
            if !e.is_finite() || !buyer.distribution.contains(e) {
                return Err(Error::invalid(
                    format!("eta[{i}]"),
                    format!(
                        "threshold {e} lies outside the support [{}, {}] (need a_i <= eta_i <= b_i)",
                        buyer.lower(),
                        buyer.upper()
                    ),
                ));
            }
        }
        Ok(ThresholdVector { eta })
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.eta
    }

    pub fn get(&self, i: usize) -> f64 {
        self.eta[i]
    }

    pub fn len(&self) -> usize {
        self.eta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eta.is_empty()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.eta
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Bit {
    Zero,
    One,
}

impl Bit {
    pub fn flip(self) -> Bit {
        match self {
            Bit::Zero => Bit::One,
            Bit::One => Bit::Zero,
        }
    }

    pub fn as_u8(self) -> u8 {
        match self {
            Bit::Zero => 0,
            Bit::One => 1,
        }
    }

    pub fn from_bool(high: bool) -> Bit {
        if high {
            Bit::One
        } else {
            Bit::Zero
        }
    }
}

impl fmt::Display for Bit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_u8())
    }
}

/// One joint bid profile: a bit per buyer.
///
/// Stored as its canonical code `sum_i bit_i * 2^i`, so buyer 0 is the
/// least significant bit and table rows are indexed directly by the code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Outcome {
    code: u32,
    len: u8,
}

impl Outcome {
    pub fn from_code(code: usize, len: usize) -> Result<Self> {
        check_outcome_len(len)?;
        if code >> len != 0 {
            return Err(Error::invalid(
                "omega",
                format!("code {code} does not fit in {len} bits"),
            ));
        }
        Ok(Outcome {
            code: code as u32,
            len: len as u8,
        })
    }

    pub fn from_bits(bits: &[Bit]) -> Result<Self> {
        check_outcome_len(bits.len())?;
        let code = bits
            .iter()
            .enumerate()
            .fold(0u32, |acc, (i, b)| acc | ((b.as_u8() as u32) << i));
        Ok(Outcome {
            code,
            len: bits.len() as u8,
        })
    }

    pub fn code(&self) -> usize {
        self.code as usize
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn bit(&self, i: usize) -> Bit {
        debug_assert!(i < self.len());
        Bit::from_bool(self.code >> i & 1 == 1)
    }

    pub fn with_bit(&self, i: usize, bit: Bit) -> Outcome {
        debug_assert!(i < self.len());
        let cleared = self.code & !(1 << i);
        Outcome {
            code: cleared | ((bit.as_u8() as u32) << i),
            len: self.len,
        }
    }

    pub fn bits(&self) -> impl Iterator<Item = Bit> + '_ {
        (0..self.len()).map(move |i| self.bit(i))
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, b) in self.bits().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{b}")?;
        }
        f.write_str(")")
    }
}

fn check_outcome_len(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::invalid("n", "need at least one buyer"));
    }
    if n > MAX_BUYERS {
        return Err(Error::Capacity(format!(
            "{n} buyers means 2^{n} outcomes; at most {MAX_BUYERS} buyers are supported"
        )));
    }
    Ok(())
}

/// Reduces a value to its bid bit: `0` on `[a, eta]`, `1` on `(eta, b]`.
pub fn quantize(v: f64, eta: f64, a: f64, b: f64) -> Result<Bit> {
    if !(a <= v && v <= b) {
        return Err(Error::invalid(
            "v",
            format!("value {v} lies outside the support [{a}, {b}]"),
        ));
    }
    if !(a <= eta && eta <= b) {
        return Err(Error::invalid(
            "eta",
            format!("threshold {eta} lies outside the support [{a}, {b}]"),
        ));
    }
    Ok(Bit::from_bool(v > eta))
}

/// Probability that the buyer sends `0`, i.e. `F(eta)`.
pub fn lambda(buyer: &BuyerSpec, eta: f64) -> f64 {
    buyer.distribution.cdf(eta)
}

pub fn lambdas(instance: &AuctionInstance, eta: &ThresholdVector) -> Vec<f64> {
    instance
        .buyers()
        .iter()
        .zip(eta.as_slice())
        .map(|(buyer, &e)| lambda(buyer, e))
        .collect()
}

/// Probability that buyer `i` sends `bit` given `lambda_i = P(bit 0)`.
#[inline]
pub fn bit_probability(lambda: f64, bit: Bit) -> f64 {
    match bit {
        Bit::Zero => lambda,
        Bit::One => 1.0 - lambda,
    }
}

/// Joint probability of an outcome under independent buyers.
pub fn outcome_pmf(instance: &AuctionInstance, eta: &ThresholdVector, omega: Outcome) -> f64 {
    debug_assert_eq!(omega.len(), instance.len());
    pmf_from_lambdas(&lambdas(instance, eta), omega)
}

pub fn pmf_from_lambdas(lambdas: &[f64], omega: Outcome) -> f64 {
    lambdas
        .iter()
        .enumerate()
        .map(|(i, &l)| bit_probability(l, omega.bit(i)))
        .product()
}

/// Probability of the other buyers' bits in `omega`, i.e. with buyer `skip` marginalized.
pub fn pmf_excluding(lambdas: &[f64], omega: Outcome, skip: usize) -> f64 {
    lambdas
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != skip)
        .map(|(j, &l)| bit_probability(l, omega.bit(j)))
        .product()
}

/// All `2^n` outcomes in canonical code order. `n` is capped at [`MAX_BUYERS`].
pub fn enumerate_outcomes(n: usize) -> Result<impl Iterator<Item = Outcome>> {
    check_outcome_len(n)?;
    Ok((0u32..(1u32 << n)).map(move |code| Outcome { code, len: n as u8 }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn simpson(f: impl Fn(f64) -> f64, lo: f64, hi: f64, intervals: usize) -> f64 {
        let h = (hi - lo) / intervals as f64;
        let mut acc = f(lo) + f(hi);
        for k in 1..intervals {
            let w = if k % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * f(lo + k as f64 * h);
        }
        acc * h / 3.0
    }

    #[test]
    fn quantize_boundaries() {
        assert_eq!(quantize(5.0, 5.0, 2.0, 8.0).unwrap(), Bit::Zero);
        assert_eq!(quantize(2.0, 5.0, 2.0, 8.0).unwrap(), Bit::Zero);
        assert_eq!(quantize(8.0, 5.0, 2.0, 8.0).unwrap(), Bit::One);
        assert_eq!(quantize(5.0001, 5.0, 2.0, 8.0).unwrap(), Bit::One);
    }

    #[test]
    fn quantize_rejects_out_of_support() {
        assert!(matches!(
            quantize(8.5, 5.0, 2.0, 8.0),
            Err(Error::Invalid { ref field, .. }) if field == "v"
        ));
        assert!(quantize(1.0, 5.0, 2.0, 8.0).is_err());
        assert!(quantize(f64::NAN, 5.0, 2.0, 8.0).is_err());
        assert!(quantize(4.0, 9.0, 2.0, 8.0).is_err());
    }

    #[test]
    fn lambda_matches_integrated_density() {
        let buyer = BuyerSpec::uniform(12.0, 20.0).unwrap();
        let integrated = simpson(|x| buyer.distribution.pdf(x), 12.0, 15.0, 1000);
        assert!((integrated - 0.375).abs() < 1e-12);
        assert!((lambda(&buyer, 15.0) - 0.375).abs() < 1e-15);
        assert_eq!(lambda(&buyer, 12.0), 0.0);
        assert_eq!(lambda(&buyer, 20.0), 1.0);
    }

    #[test]
    fn pmf_two_buyers() {
        let instance = AuctionInstance::new(
            10.0,
            vec![
                BuyerSpec::uniform(5.0, 15.0).unwrap(),
                BuyerSpec::uniform(8.0, 20.0).unwrap(),
            ],
        )
        .unwrap();
        let eta = ThresholdVector::new(&instance, vec![13.0, 15.0]).unwrap();
        let both_high = Outcome::from_bits(&[Bit::One, Bit::One]).unwrap();
        assert!((outcome_pmf(&instance, &eta, both_high) - 1.0 / 12.0).abs() < 1e-15);

        // Monte Carlo frequency of the same profile.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let trials = 200_000;
        let hits = (0..trials)
            .filter(|_| {
                let v1 = instance.buyer(0).distribution.sample(&mut rng);
                let v2 = instance.buyer(1).distribution.sample(&mut rng);
                v1 > 13.0 && v2 > 15.0
            })
            .count();
        let p = 1.0 / 12.0;
        let se = (p * (1.0 - p) / trials as f64).sqrt();
        assert!((hits as f64 / trials as f64 - p).abs() < 4.0 * se);
    }

    #[test]
    fn pmf_zero_lambda() {
        let instance =
            AuctionInstance::new(0.0, vec![BuyerSpec::uniform(1.0, 2.0).unwrap()]).unwrap();
        let eta = ThresholdVector::new(&instance, vec![1.0]).unwrap();
        let zero = Outcome::from_code(0, 1).unwrap();
        assert_eq!(outcome_pmf(&instance, &eta, zero), 0.0);
    }

    #[test]
    fn enumeration_order() {
        let one: Vec<_> = enumerate_outcomes(1).unwrap().map(|o| o.code()).collect();
        assert_eq!(one, vec![0, 1]);
        let two: Vec<Vec<Bit>> = enumerate_outcomes(2)
            .unwrap()
            .map(|o| o.bits().collect())
            .collect();
        use Bit::*;
        assert_eq!(
            two,
            vec![
                vec![Zero, Zero],
                vec![One, Zero],
                vec![Zero, One],
                vec![One, One]
            ]
        );
        let mut three: Vec<_> = enumerate_outcomes(3).unwrap().map(|o| o.code()).collect();
        assert_eq!(three.len(), 8);
        three.dedup();
        assert_eq!(three.len(), 8);
    }

    #[test]
    fn enumeration_cap() {
        assert!(matches!(
            enumerate_outcomes(MAX_BUYERS + 1),
            Err(Error::Capacity(_))
        ));
        assert!(enumerate_outcomes(0).is_err());
    }

    #[test]
    fn instance_validation() {
        assert!(AuctionInstance::new(1.0, vec![]).is_err());
        assert!(BuyerSpec::uniform(3.0, 3.0).is_err());
        assert!(BuyerSpec::uniform(f64::NEG_INFINITY, 3.0).is_err());
        let instance = AuctionInstance::symmetric_uniform(5.0, 5.0, 20.0, 2).unwrap();
        let err = ThresholdVector::new(&instance, vec![4.0, 10.0]).unwrap_err();
        assert!(err.to_string().contains("eta[0]"));
        assert!(ThresholdVector::new(&instance, vec![10.0]).is_err());
    }

    #[test]
    fn instance_json_rejects_unknown_keys() {
        let ok: AuctionInstance =
            serde_json::from_str(r#"{"v0":1,"buyers":[{"kind":"uniform","a":0,"b":2}]}"#).unwrap();
        assert_eq!(ok.len(), 1);
        assert!(serde_json::from_str::<AuctionInstance>(
            r#"{"v0":1,"buyers":[{"kind":"uniform","a":0,"b":2}],"extra":3}"#
        )
        .is_err());
        assert!(serde_json::from_str::<AuctionInstance>(
            r#"{"v0":1,"buyers":[{"kind":"uniform","a":0,"b":2,"c":1}]}"#
        )
        .is_err());
        assert!(serde_json::from_str::<AuctionInstance>(
            r#"{"v0":1,"buyers":[{"kind":"uniform","a":3,"b":2}]}"#
        )
        .is_err());
    }

    #[test]
    fn quantize_frequency_converges_to_lambda() {
        let buyer = BuyerSpec::uniform(2.0, 8.0).unwrap();
        let eta = 5.3;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let trials = 1_000_000;
        let zeros = (0..trials)
            .filter(|_| {
                let v = buyer.distribution.sample(&mut rng);
                quantize(v, eta, 2.0, 8.0).unwrap() == Bit::Zero
            })
            .count();
        let p = lambda(&buyer, eta);
        let se = (p * (1.0 - p) / trials as f64).sqrt();
        assert!((zeros as f64 / trials as f64 - p).abs() < 4.0 * se);
    }

    fn instance_and_eta() -> impl Strategy<Value = (AuctionInstance, ThresholdVector)> {
        (1usize..=10)
            .prop_flat_map(|n| {
                (
                    -5.0f64..25.0,
                    prop::collection::vec((0.0f64..20.0, 0.1f64..10.0, 0.0f64..=1.0), n),
                )
            })
            .prop_map(|(v0, raw)| {
                let buyers: Vec<_> = raw
                    .iter()
                    .map(|&(a, w, _)| BuyerSpec::uniform(a, a + w).unwrap())
                    .collect();
                let instance = AuctionInstance::new(v0, buyers).unwrap();
                let eta = raw
                    .iter()
                    .map(|&(a, w, t)| (a + t * w).min(a + w))
                    .collect();
                let eta = ThresholdVector::new(&instance, eta).unwrap();
                (instance, eta)
            })
    }

    proptest! {
        #[test]
        fn pmf_is_normalized((instance, eta) in instance_and_eta()) {
            let total: f64 = enumerate_outcomes(instance.len())
                .unwrap()
                .map(|o| outcome_pmf(&instance, &eta, o))
                .sum();
            prop_assert!((total - 1.0).abs() < 1e-12);
        }

        #[test]
        fn quantize_is_monotone(a in -10.0f64..10.0, w in 0.1f64..10.0, t in 0.0f64..=1.0, x in 0.0f64..=1.0, y in 0.0f64..=1.0) {
            let b = a + w;
            let eta = (a + t * w).min(b);
            let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
            let v_lo = (a + lo * w).min(b);
            let v_hi = (a + hi * w).min(b);
            prop_assert!(quantize(v_lo, eta, a, b).unwrap() <= quantize(v_hi, eta, a, b).unwrap());
        }

        #[test]
        fn outcome_code_roundtrip(n in 1usize..=MAX_BUYERS, raw in any::<u32>()) {
            let code = (raw as usize) & ((1 << n) - 1);
            let omega = Outcome::from_code(code, n).unwrap();
            let bits: Vec<Bit> = omega.bits().collect();
            prop_assert_eq!(Outcome::from_bits(&bits).unwrap(), omega);
        }
    }
}
