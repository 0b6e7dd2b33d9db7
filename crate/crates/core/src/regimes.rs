//! Three-user capacity regimes.
//!
//! Every regime condition is a sharp inequality on `(a₁, a₂, P)`. Channels
//! with a very strong link (`aᵢ ≥ √(1 + Pᵢ₊₁)`) must be split with
//! [`remove_very_strong`](crate::chain::remove_very_strong) first.

use serde::{Deserialize, Serialize};

use crate::capacity::cap;
use crate::channel::ChannelConfig;
use crate::error::{Error, Result};
use crate::hk::max_sum_rate;
use crate::lp::{LinearProgram, LpSolution};

/// Gap between the mixed-II achievable sum rate and its upper bound, bits.
pub const MIXED_II_GAP: f64 = 0.5;

/// Which users send common messages at the optimal split, by `(γ₁, γ₂)`:
/// I = (1,1), II = (0,1), III = (0,0), VI = (1,0).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SplittingRegime {
    I,
    II,
    III,
    VI,
}

impl SplittingRegime {
    pub fn from_split(gamma1: f64, gamma2: f64) -> Self {
        match (gamma1 > 0.5, gamma2 > 0.5) {
            (true, true) => SplittingRegime::I,
            (false, true) => SplittingRegime::II,
            (false, false) => SplittingRegime::III,
            (true, false) => SplittingRegime::VI,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SplittingRegime::I => "I",
            SplittingRegime::II => "II",
            SplittingRegime::III => "III",
            SplittingRegime::VI => "VI",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CapacityStatus {
    ExactNoisy,
    ExactStrong,
    ExactMixedI,
    Gap05MixedII,
    /// Outside every solved regime; `upper` is only the interference-free
    /// bound `Σ C(Pᵢ)`.
    AchievableOnly,
}

impl CapacityStatus {
    pub fn is_exact(self) -> bool {
        matches!(
            self,
            CapacityStatus::ExactNoisy | CapacityStatus::ExactStrong | CapacityStatus::ExactMixedI
        )
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CapacityStatus::ExactNoisy => "ExactNoisy",
            CapacityStatus::ExactStrong => "ExactStrong",
            CapacityStatus::ExactMixedI => "ExactMixedI",
            CapacityStatus::Gap05MixedII => "Gap05MixedII",
            CapacityStatus::AchievableOnly => "AchievableOnly",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionCheck {
    pub name: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    pub splitting_regime: SplittingRegime,
    pub capacity_status: CapacityStatus,
    pub achievable: f64,
    pub upper: f64,
    pub conditions: Vec<ConditionCheck>,
}

/// Truth values of the four regime conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegimeConditions {
    pub noisy: bool,
    pub strong: bool,
    pub mixed_i: bool,
    pub mixed_ii: bool,
}

fn le(x: f64, y: f64, tol: f64) -> bool {
    x <= y + tol
}

fn lt(x: f64, y: f64, tol: f64) -> bool {
    x < y + tol
}

fn three_user(cfg: &ChannelConfig) -> Result<(f64, f64, [f64; 3])> {
    if cfg.users() != 3 {
        return Err(Error::NotThreeUser(cfg.users()));
    }
    let (a, p) = (cfg.gains(), cfg.powers());
    Ok((a[0], a[1], [p[0], p[1], p[2]]))
}

/// Fails on the first link with `aᵢ ≥ √(1 + Pᵢ₊₁)`.
pub fn ensure_no_very_strong(cfg: &ChannelConfig) -> Result<()> {
    for (index, &gain) in cfg.gains().iter().enumerate() {
        let threshold = cfg.very_strong_threshold(index);
        if gain >= threshold {
            return Err(Error::VeryStrongLink { index, gain, threshold });
        }
    }
    Ok(())
}

impl RegimeConditions {
    /// Evaluates all four conditions; `tol` widens every inequality and is
    /// zero for the exact regime boundaries.
    pub fn evaluate(cfg: &ChannelConfig, tol: f64) -> Result<Self> {
        let (a1, a2, p) = three_user(cfg)?;
        let cross1 = 1.0 + a1 * a1 * p[0];
        let strong1 = le(1.0, a1, tol) && lt(a1, (1.0 + p[1]).sqrt(), tol);
        let below3 = lt(a2, (1.0 + p[2]).sqrt(), tol);
        Ok(RegimeConditions {
            noisy: le(a1 * a1 + a2 * a2 * cross1 * cross1, 1.0, tol),
            strong: strong1 && le(1.0, a2, tol) && below3,
            mixed_i: lt(a1, 1.0, tol) && le(((1.0 + p[2]) / cross1).sqrt(), a2, tol) && below3,
            mixed_ii: strong1 && le(a2, (1.0 / cross1).sqrt(), tol),
        })
    }

    pub fn checks(&self) -> Vec<ConditionCheck> {
        [
            ("noisy", self.noisy),
            ("strong", self.strong),
            ("mixed_i", self.mixed_i),
            ("mixed_ii", self.mixed_ii),
        ]
        .into_iter()
        .map(|(name, holds)| ConditionCheck { name: name.to_owned(), holds })
        .collect()
    }

    pub fn count(&self) -> usize {
        [self.noisy, self.strong, self.mixed_i, self.mixed_ii]
            .into_iter()
            .filter(|&b| b)
            .count()
    }
}

pub fn classify(cfg: &ChannelConfig) -> Result<RegimeReport> {
    classify_with_tolerance(cfg, 0.0)
}

/// Classification with regime inequalities widened by `tol`, for boundary
/// studies.
pub fn classify_with_tolerance(cfg: &ChannelConfig, tol: f64) -> Result<RegimeReport> {
    let conditions = RegimeConditions::evaluate(cfg, tol)?;
    ensure_no_very_strong(cfg)?;
    let result = max_sum_rate(cfg);
    let gamma = result.split.gamma();
    let achievable = result.sum_rate;

    let (capacity_status, upper) = if conditions.noisy {
        (CapacityStatus::ExactNoisy, achievable)
    } else if conditions.strong {
        (CapacityStatus::ExactStrong, achievable)
    } else if conditions.mixed_i {
        (CapacityStatus::ExactMixedI, achievable)
    } else if conditions.mixed_ii {
        (CapacityStatus::Gap05MixedII, achievable + MIXED_II_GAP)
    } else {
        let bound = cfg.powers().iter().map(|&p| cap(p)).sum();
        (CapacityStatus::AchievableOnly, bound)
    };

    Ok(RegimeReport {
        splitting_regime: SplittingRegime::from_split(gamma[0], gamma[1]),
        capacity_status,
        achievable,
        upper,
        conditions: conditions.checks(),
    })
}

fn require(cfg: &ChannelConfig, holds: impl Fn(&RegimeConditions) -> bool, name: &'static str) -> Result<[f64; 5]> {
    let conditions = RegimeConditions::evaluate(cfg, 0.0)?;
    if !holds(&conditions) {
        return Err(Error::RegimeMismatch(name));
    }
    let (a1, a2, p) = three_user(cfg)?;
    Ok([a1, a2, p[0], p[1], p[2]])
}

/// Treat-interference-as-noise sum capacity
/// `C(P₁) + C(P₂/(1 + a₁²P₁)) + C(P₃/(1 + a₂²P₂))`.
pub fn noisy_sum_capacity(cfg: &ChannelConfig) -> Result<f64> {
    let [a1, a2, p1, p2, p3] = require(cfg, |c| c.noisy, "noisy")?;
    Ok(cap(p1) + cap(p2 / (1.0 + a1 * a1 * p1)) + cap(p3 / (1.0 + a2 * a2 * p2)))
}

/// Seven-inequality capacity region of the strong regime over
/// `(R₁, R₂, R₃)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrongRegion {
    /// Right-hand sides in [`StrongRegion::ROWS`] order.
    pub rhs: [f64; 7],
}

impl StrongRegion {
    /// `R₁, R₂, R₃ ≤ C(Pᵢ)`; `R₁ ≤ C(a₁²P₁)`; `R₂ ≤ C(a₂²P₂)`;
    /// `R₁ + R₂ ≤ C(a₁²P₁ + P₂)`; `R₂ + R₃ ≤ C(a₂²P₂ + P₃)`.
    pub const ROWS: [[f64; 3]; 7] = [
        [1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, 0.0, 1.0],
        [1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [1.0, 1.0, 0.0],
        [0.0, 1.0, 1.0],
    ];

    pub fn contains(&self, rates: [f64; 3], tol: f64) -> bool {
        rates.iter().all(|&r| r >= -tol)
            && Self::ROWS.iter().zip(&self.rhs).all(|(row, b)| {
                row.iter().zip(&rates).map(|(c, r)| c * r).sum::<f64>() <= b + tol
            })
    }

    /// Sum-rate maximum by LP, independent of the closed-form minimum.
    pub fn max_sum_lp(&self) -> LpSolution {
        Self::ROWS
            .iter()
            .zip(&self.rhs)
            .fold(LinearProgram::new(vec![1.0; 3]), |lp, (row, &b)| lp.constraint(row.to_vec(), b))
            .maximize()
            .expect("strong region is bounded with a feasible origin")
    }
}

pub fn strong_region(cfg: &ChannelConfig) -> Result<StrongRegion> {
    let [a1, a2, p1, p2, p3] = require(cfg, |c| c.strong, "strong")?;
    let (x1, x2) = (a1 * a1 * p1, a2 * a2 * p2);
    Ok(StrongRegion {
        rhs: [cap(p1), cap(p2), cap(p3), cap(x1), cap(x2), cap(x1 + p2), cap(x2 + p3)],
    })
}

/// `min{C(P₁) + C(a₂²P₂ + P₃), C(P₃) + C(a₁²P₁ + P₂)}`.
pub fn strong_sum_capacity(cfg: &ChannelConfig) -> Result<f64> {
    let [a1, a2, p1, p2, p3] = require(cfg, |c| c.strong, "strong")?;
    let first = cap(p1) + cap(a2 * a2 * p2 + p3);
    let last = cap(p3) + cap(a1 * a1 * p1 + p2);
    Ok(first.min(last))
}

/// `C(P₁) + C(P₂/(1 + a₁²P₁)) + C(P₃)`.
pub fn mixed1_sum_capacity(cfg: &ChannelConfig) -> Result<f64> {
    let [a1, _, p1, p2, p3] = require(cfg, |c| c.mixed_i, "mixed I")?;
    Ok(cap(p1) + cap(p2 / (1.0 + a1 * a1 * p1)) + cap(p3))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SumBounds {
    pub achievable: f64,
    pub upper: f64,
}

/// Achievable `C(a₁²P₁ + P₂) + C(P₃/(1 + a₂²P₂))` and the bound half a bit
/// above it.
pub fn mixed2_bounds(cfg: &ChannelConfig) -> Result<SumBounds> {
    let [a1, a2, p1, p2, p3] = require(cfg, |c| c.mixed_ii, "mixed II")?;
    let achievable = cap(a1 * a1 * p1 + p2) + cap(p3 / (1.0 + a2 * a2 * p2));
    Ok(SumBounds { achievable, upper: achievable + MIXED_II_GAP })
}
