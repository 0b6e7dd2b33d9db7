//! Closed-form sum rate of simple Han-Kobayashi schemes (Gaussian codebooks,
//! one common/private power split per user, no time sharing).
//!
//! The rate is computed user by user. Each user is reduced to an effective
//! direct amplitude `hᵢ ≤ 1` that absorbs the rate its predecessor forces on
//! it, and user `i` goes all-common exactly when `aᵢ > hᵢ`.
//!
//! The result is the best sum rate over all-common/all-private splits, and
//! over every split for two users. With three or more users, fractional
//! splits can do better outside the regimes where a capacity converse holds
//! (see `polytope::tests::interior_split_can_beat_closed_form`).

use serde::{Deserialize, Serialize};

use crate::capacity::cap;
use crate::channel::ChannelConfig;
use crate::error::{Error, Result};

/// Effective direct amplitudes `h` and the per-user rates `C(hᵢ²Pᵢ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffectiveGains {
    pub h: Vec<f64>,
    pub r_star: Vec<f64>,
}

/// Common-power fraction per user.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PowerSplit {
    gamma: Vec<f64>,
}

impl PowerSplit {
    pub fn new(gamma: Vec<f64>) -> Result<Self> {
        if let Some((i, g)) = gamma.iter().enumerate().find(|(_, g)| !(0.0..=1.0).contains(*g)) {
            return Err(Error::InvalidSplit(format!("gamma[{i}] = {g} is outside [0, 1]")));
        }
        Ok(PowerSplit { gamma })
    }

    /// All-private split for `k` users.
    pub fn private(k: usize) -> Self {
        PowerSplit { gamma: vec![0.0; k] }
    }

    pub fn gamma(&self) -> &[f64] {
        &self.gamma
    }

    pub fn len(&self) -> usize {
        self.gamma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gamma.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SumRateResult {
    pub sum_rate: f64,
    pub gains: EffectiveGains,
    pub split: PowerSplit,
}

/// Next effective amplitude from the previous one.
fn next_gain(a: f64, h_prev: f64, p_prev: f64, p: f64) -> f64 {
    let a2 = a * a;
    if a <= h_prev {
        (1.0 / (1.0 + a2 * p_prev)).sqrt()
    } else {
        let h2 = h_prev * h_prev;
        (((a2 - h2) * p_prev + p) / (p + h2 * p_prev * p)).sqrt().min(1.0)
    }
}

pub fn effective_gains(cfg: &ChannelConfig) -> EffectiveGains {
    let (a, p) = (cfg.gains(), cfg.powers());
    let mut h = Vec::with_capacity(cfg.users());
    h.push(1.0);
    for i in 1..cfg.users() {
        let next = next_gain(a[i - 1], h[i - 1], p[i - 1], p[i]);
        h.push(next);
    }
    let r_star = h.iter().zip(p).map(|(h, p)| cap(h * h * p)).collect();
    EffectiveGains { h, r_star }
}

fn split_from_gains(cfg: &ChannelConfig, gains: &EffectiveGains) -> PowerSplit {
    let mut gamma: Vec<f64> = cfg
        .gains()
        .iter()
        .zip(&gains.h)
        .map(|(a, h)| if a <= h { 0.0 } else { 1.0 })
        .collect();
    // the last user interferes with nobody, its split is immaterial
    gamma.push(0.0);
    PowerSplit { gamma }
}

/// Sum-rate-optimal split: `γᵢ = 1` iff `aᵢ > hᵢ`, with `γ_K = 0`.
pub fn optimal_split(cfg: &ChannelConfig) -> PowerSplit {
    split_from_gains(cfg, &effective_gains(cfg))
}

pub fn max_sum_rate(cfg: &ChannelConfig) -> SumRateResult {
    let gains = effective_gains(cfg);
    let split = split_from_gains(cfg, &gains);
    SumRateResult {
        sum_rate: gains.r_star.iter().sum(),
        gains,
        split,
    }
}

/// Rate of user `user` (one-based, `2 ≤ user ≤ K`) from the case-split form
/// `C(Pᵢ/(1 + a²Pᵢ₋₁))` or `min{C(a²Pᵢ₋₁ + Pᵢ) − C(hᵢ₋₁²Pᵢ₋₁), C(Pᵢ)}`,
/// without going through `hᵢ`.
pub fn r_star_case_form(cfg: &ChannelConfig, user: usize) -> Result<f64> {
    let k = cfg.users();
    if !(2..=k).contains(&user) {
        return Err(Error::UserIndex { index: user, k });
    }
    let h_prev = effective_gains(cfg).h[user - 2];
    let a = cfg.gains()[user - 2];
    let (p_prev, p) = (cfg.powers()[user - 2], cfg.powers()[user - 1]);
    Ok(case_form(a, h_prev, p_prev, p))
}

pub(crate) fn case_form(a: f64, h_prev: f64, p_prev: f64, p: f64) -> f64 {
    if a <= h_prev {
        cap(p / (1.0 + a * a * p_prev))
    } else {
        (cap(a * a * p_prev + p) - cap(h_prev * h_prev * p_prev)).min(cap(p))
    }
}
