use proptest::prelude::*;
use quantbid::mechanism::{counterfactual_win, interim_quantities, virtual_utilities};
use quantbid::verify::{allocation_oracle, check_deviations, check_interim, max_loser_payment};
use quantbid::{
    build_mechanism, expected_seller_gain, AuctionInstance, Bit, BuyerSpec, MechanismTable,
    ThresholdVector,
};

/// Up to four uniform buyers, any seller value near the supports, thresholds
/// anywhere in the supports including both ends.
fn case() -> impl Strategy<Value = (AuctionInstance, ThresholdVector)> {
    let buyer = (-5.0f64..15.0, 0.5f64..15.0, 0u8..10, 0.0f64..=1.0);
    (prop::collection::vec(buyer, 1..=4), 0.0f64..=1.0).prop_map(|(raw, t)| {
        let buyers: Vec<BuyerSpec> = raw
            .iter()
            .map(|&(a, w, _, _)| BuyerSpec::uniform(a, a + w).unwrap())
            .collect();
        let lo = buyers
            .iter()
            .map(|b| b.lower())
            .fold(f64::INFINITY, f64::min);
        let hi = buyers
            .iter()
            .map(|b| b.upper())
            .fold(f64::NEG_INFINITY, f64::max);
        let v0 = lo - 5.0 + t * (hi - lo + 7.0);
        let eta = raw
            .iter()
            .zip(&buyers)
            .map(|(&(_, _, pick, u), b)| match pick {
                0 => b.lower(),
                1 => b.upper(),
                _ => b.lower() + u * (b.upper() - b.lower()),
            })
            .collect();
        let instance = AuctionInstance::new(v0, buyers).unwrap();
        let eta = ThresholdVector::new(&instance, eta).unwrap();
        (instance, eta)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn seller_utility_two_ways((instance, eta) in case()) {
        let table = build_mechanism(&instance, &eta).unwrap();
        let from_payments = table.expected_seller_utility();
        let from_objective = instance.v0() + table.objective();
        prop_assert!((from_payments - from_objective).abs() < 1e-9);
        prop_assert!((table.objective() - expected_seller_gain(&instance, &eta)).abs() < 1e-12);
        prop_assert!(table.objective() >= 0.0);
    }

    #[test]
    fn greedy_matches_oracle((instance, eta) in case()) {
        let table = build_mechanism(&instance, &eta).unwrap();
        let oracle = allocation_oracle(&instance, &eta).unwrap();
        prop_assert!((table.objective() - oracle.gain).abs() < 1e-12);
        for omega in table.outcomes() {
            if table.pmf(omega) > 0.0 {
                prop_assert!(oracle.optimal_choices[omega.code()].contains(&table.winner(omega)));
            }
        }
    }

    #[test]
    fn truthful_and_rational((instance, eta) in case()) {
        let table = build_mechanism(&instance, &eta).unwrap();
        let interim = check_interim(&table);
        prop_assert!(interim.min_win_probability_gap >= 0.0);
        prop_assert!(interim.max_payment_residual < 1e-9);
        let d = check_deviations(&table, 101).unwrap();
        prop_assert!(d.ic_deviation_max <= 1e-12);
        prop_assert!(d.ir_min_utility >= -1e-12);
        prop_assert!(d.lower_bound_utility_max <= 1e-12);
        prop_assert!(d.threshold_indifference_max <= 1e-12);
    }

    #[test]
    fn payments_are_ex_post_rational((instance, eta) in case()) {
        let table = build_mechanism(&instance, &eta).unwrap();
        prop_assert_eq!(max_loser_payment(&table), 0.0);
        let utilities = virtual_utilities(&instance, &eta);
        for omega in table.outcomes() {
            let Some(w) = table.winner(omega) else { continue };
            let lowest_value = match omega.bit(w) {
                Bit::Zero => instance.buyer(w).lower(),
                Bit::One => eta.get(w),
            };
            prop_assert!(table.payment(omega, w) <= lowest_value + 1e-12);
            // a bit-1 winner who would still win with bit 0 pays the bit-0 price
            if omega.bit(w) == Bit::One && counterfactual_win(&utilities, omega, w) {
                prop_assert!((table.payment(omega, w) - instance.buyer(w).lower()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn winners_have_positive_scores((instance, eta) in case()) {
        let table = build_mechanism(&instance, &eta).unwrap();
        for omega in table.outcomes() {
            let scores: Vec<f64> = table.utilities().iter().enumerate().map(|(i, u)| u.score(omega.bit(i))).collect();
            match table.winner(omega) {
                Some(w) => {
                    prop_assert!(scores[w] > 0.0);
                    prop_assert!(scores.iter().all(|&s| s <= scores[w]));
                    prop_assert!(scores[..w].iter().all(|&s| s < scores[w]));
                }
                None => prop_assert!(scores.iter().all(|&s| s <= 0.0)),
            }
        }
    }

    #[test]
    fn json_roundtrip_preserves_interim((instance, eta) in case()) {
        let table = build_mechanism(&instance, &eta).unwrap();
        let back = MechanismTable::from_json(&table.to_json()).unwrap();
        for i in 0..instance.len() {
            prop_assert_eq!(interim_quantities(&back, i), interim_quantities(&table, i));
        }
    }
}
