//! Seller-optimal auctions when every buyer can send only one bit.
//!
//! Each buyer privately observes a value `v_i` drawn from a known law on
//! `[a_i, b_i]` and reports a single bit: 0 if `v_i <= eta_i`, 1 otherwise.
//! The seller, who values the object at `v0`, chooses both the thresholds
//! `eta` and a truthful mechanism over the `2^N` bid profiles.
//!
//! * [`model`]: instances, thresholds, quantization and the bid-profile law.
//! * [`mechanism`]: virtual utilities, the winner rule and payments, interim
//!   quantities.
//! * [`thresholds`]: the one-buyer closed form and grid searches over `eta`.
//! * [`verify`]: independent checks of truthfulness, participation and
//!   optimality, plus a Monte Carlo simulator.
//! * [`baseline`]: the analog optimal auction and random thresholds, for
//!   comparison.
//! * [`io`]: JSON tables and reports, CSV surfaces and sweeps.
//!
//! ```
//! use quantbid::{build_mechanism, AuctionInstance, BuyerSpec, ThresholdVector};
//!
//! let instance = AuctionInstance::new(
//!     10.0,
//!     vec![BuyerSpec::uniform(2.0, 8.0)?, BuyerSpec::uniform(12.0, 20.0)?],
//! )?;
//! let eta = ThresholdVector::new(&instance, vec![5.0, 15.0])?;
//! let table = build_mechanism(&instance, &eta)?;
//! assert!((table.objective() - 3.125).abs() < 1e-12);
//! # Ok::<(), quantbid::Error>(())
//! ```

pub mod baseline;
pub mod error;
pub mod io;
pub mod mechanism;
pub mod model;
pub mod stats;
pub mod thresholds;
pub mod verify;

pub use error::{Error, Result};
pub use mechanism::{
    build_mechanism, expected_seller_gain, expected_seller_utility, MechanismTable,
};
pub use model::{AuctionInstance, Bit, BuyerSpec, Outcome, ThresholdVector, ValueDistribution};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/model.md")]
    mod model {}
    #[doc = include_str!("../../../book/src/mechanism.md")]
    mod mechanism {}
    #[doc = include_str!("../../../book/src/thresholds.md")]
    mod thresholds {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/comparison.md")]
    mod comparison {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
