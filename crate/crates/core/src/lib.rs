//! Sum-rate and sum-capacity analysis for the K-user cascade Gaussian
//! Z-interference channel, where receiver `i` hears its own transmitter and
//! transmitter `i − 1` only.
//!
//! * [`hk`] evaluates the best simple Han-Kobayashi sum rate in closed form.
//! * [`polytope`] re-derives it by LP over explicit rate regions.
//! * [`regimes`] classifies three-user channels and gives exact sum
//!   capacities or half-bit bounds.
//! * [`chain`] cuts long chains into independently solvable pieces.
//!
//! All rates are in bits per real channel use.

pub mod capacity;
pub mod chain;
pub mod channel;
pub mod error;
pub mod hk;
pub mod lp;
pub mod polytope;
pub mod regimes;

/// Shared numeric tolerances.
pub mod tolerance {
    /// Largest allowed excess of a grid LP value over the closed form.
    pub const ORACLE: f64 = 1e-6;
    /// Agreement between two exact routes to the same quantity.
    pub const IDENTITY: f64 = 1e-9;
    /// Default widening of regime inequalities (none).
    pub const REGIME: f64 = 0.0;
}

pub use capacity::{gaussian_capacity, inverse_capacity};
pub use chain::{lemma2_segment, remove_very_strong, Cut, CutReason, SegmentReport, SegmentStatus, Segmentation, SubChain};
pub use channel::{to_standard_form, validate, ChannelConfig, ChannelSpec, GeneralChannel};
pub use error::{Error, Result, ValidationError};
pub use hk::{effective_gains, max_sum_rate, optimal_split, r_star_case_form, EffectiveGains, PowerSplit, SumRateResult};
pub use polytope::{build_polytope, grid_oracle, max_sum_lp, GridOracle, GridPoint, OracleReport, RatePolytope};
pub use regimes::{
    classify, classify_with_tolerance, mixed1_sum_capacity, mixed2_bounds, noisy_sum_capacity, strong_region,
    strong_sum_capacity, CapacityStatus, RegimeReport, SplittingRegime, StrongRegion,
};
