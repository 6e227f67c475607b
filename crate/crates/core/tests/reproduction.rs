//! Reference values computed independently with exact rational arithmetic.

use quantbid::thresholds::{
    grid_search, optimize_symmetric, single_buyer_optimum, support_grids, ThresholdChoice,
};
use quantbid::{expected_seller_gain, AuctionInstance, BuyerSpec, ThresholdVector};

fn two_buyers(v0: f64, s1: (f64, f64), s2: (f64, f64)) -> AuctionInstance {
    AuctionInstance::new(
        v0,
        vec![
            BuyerSpec::uniform(s1.0, s1.1).unwrap(),
            BuyerSpec::uniform(s2.0, s2.1).unwrap(),
        ],
    )
    .unwrap()
}

fn gain_at(instance: &AuctionInstance, eta: &[f64]) -> f64 {
    expected_seller_gain(
        instance,
        &ThresholdVector::new(instance, eta.to_vec()).unwrap(),
    )
}

#[test]
fn single_buyer_posted_threshold() {
    let s = single_buyer_optimum(10.0, 12.0, 20.0).unwrap();
    assert_eq!(s.eta_opt, ThresholdChoice::Exact(15.0));
    assert_eq!(s.gain_opt, 25.0 / 8.0);
}

#[test]
fn disjoint_supports_ignore_the_low_buyer() {
    let instance = two_buyers(10.0, (2.0, 8.0), (12.0, 20.0));
    for eta1 in [2.0, 3.5, 5.0, 8.0] {
        assert!((gain_at(&instance, &[eta1, 15.0]) - 25.0 / 8.0).abs() < 1e-12);
    }
    let unit = grid_search(&instance, &support_grids(&instance, 1.0)).unwrap();
    assert_eq!(unit.ties.len(), 7);
    assert!(unit.ties.iter().all(|t| t[1] == 15.0));
}

#[test]
fn overlapping_supports_unit_grid() {
    let instance = two_buyers(10.0, (5.0, 15.0), (8.0, 20.0));
    assert!((gain_at(&instance, &[13.0, 15.0]) - 73.0 / 30.0).abs() < 1e-12);
    assert!((gain_at(&instance, &[12.0, 15.0]) - 73.0 / 30.0).abs() < 1e-12);
    let unit = grid_search(&instance, &support_grids(&instance, 1.0)).unwrap();
    assert_eq!(unit.ties, vec![vec![12.0, 15.0], vec![13.0, 15.0]]);
    assert_eq!(unit.eta_opt.as_slice(), &[12.0, 15.0]);
}

#[test]
fn overlapping_supports_fine_grid_moves_second_threshold() {
    let instance = two_buyers(10.0, (5.0, 15.0), (8.0, 20.0));
    let fine = grid_search(&instance, &support_grids(&instance, 0.01)).unwrap();
    assert_eq!(fine.ties, vec![vec![12.5, 15.31]]);
    assert!((fine.gain_opt - 589453.0 / 240000.0).abs() < 1e-12);
    assert!(fine.gain_opt > 73.0 / 30.0);
}

#[test]
fn symmetric_pair_optimum_is_asymmetric() {
    let instance = AuctionInstance::symmetric_uniform(5.0, 5.0, 20.0, 2).unwrap();
    let s = optimize_symmetric(&instance, 0.05).unwrap();
    assert!(!s.symmetric);
    assert!((s.gain_opt - 8789.0 / 1500.0).abs() < 1e-9);
    let mut eta = s.eta_opt.into_vec();
    eta.sort_by(f64::total_cmp);
    assert!((eta[0] - 12.5).abs() < 1e-9 && (eta[1] - 14.35).abs() < 1e-9);
}
