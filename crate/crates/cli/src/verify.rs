//! Randomized verification of the closed-form sum rate against the grid
//! oracle.
//!
//! Channels are drawn from a ChaCha8 stream seeded with `seed`: `K` uniform
//! on `k_min..=k_max`, each `Pᵢ` log-uniform on `[p_min, p_max]`, each `aᵢ`
//! uniform on `[0, √(1 + Pᵢ₊₁))`. The same seed always yields the same
//! channels and the same report.

use anyhow::{bail, Result};
use cgzic_core::{build_polytope, max_sum_lp, max_sum_rate, tolerance, ChannelConfig, GridOracle, PowerSplit};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::output::SCHEMA_VERSION;

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub count: usize,
    pub k_min: usize,
    pub k_max: usize,
    pub grid_step: f64,
    pub seed: u64,
    pub p_min: f64,
    pub p_max: f64,
    /// Allowed excess of any grid LP value over the closed form.
    pub tolerance: f64,
    /// Use this channel for every instance instead of sampling.
    pub channel: Option<ChannelConfig>,
    pub max_points: u128,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            count: 200,
            k_min: 2,
            k_max: 3,
            grid_step: 0.05,
            seed: 0,
            p_min: 0.1,
            p_max: 100.0,
            tolerance: tolerance::ORACLE,
            channel: None,
            max_points: cgzic_core::polytope::DEFAULT_MAX_GRID_POINTS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceReport {
    pub index: usize,
    pub channel: ChannelConfig,
    pub closed_form: f64,
    pub best_sum: f64,
    pub best_split: PowerSplit,
    pub max_violation: f64,
    /// `|LP(optimal split) − closed form|`.
    pub optimal_split_gap: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub generator: &'static str,
    pub seed: u64,
    pub count: usize,
    pub grid_step: f64,
    pub tolerance: f64,
    pub worst_max_violation: Option<f64>,
    pub worst_optimal_split_gap: Option<f64>,
    pub failures: Vec<usize>,
    pub instances: Vec<InstanceReport>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn sample_channel(rng: &mut ChaCha8Rng, opts: &VerifyOptions) -> ChannelConfig {
    let k = rng.random_range(opts.k_min..=opts.k_max);
    let (lo, hi) = (opts.p_min.ln(), opts.p_max.ln());
    let powers: Vec<f64> = (0..k).map(|_| (lo + (hi - lo) * rng.random::<f64>()).exp()).collect();
    let gains = (1..k).map(|i| rng.random::<f64>() * (1.0 + powers[i]).sqrt()).collect();
    ChannelConfig::new(gains, powers).expect("sampled channels are valid")
}

/// Channels the campaign will check, in order.
pub fn sample_channels(opts: &VerifyOptions) -> Vec<ChannelConfig> {
    if let Some(cfg) = &opts.channel {
        return vec![cfg.clone(); opts.count];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    (0..opts.count).map(|_| sample_channel(&mut rng, opts)).collect()
}

pub fn verify(opts: &VerifyOptions) -> Result<VerifyReport> {
    if opts.k_min < 2 || opts.k_min > opts.k_max {
        bail!("need 2 <= k_min <= k_max, got {}..={}", opts.k_min, opts.k_max);
    }
    if !(opts.p_min > 0.0 && opts.p_min <= opts.p_max && opts.p_max.is_finite()) {
        bail!("need 0 < p_min <= p_max, got [{}, {}]", opts.p_min, opts.p_max);
    }
    let grid = GridOracle::new(opts.grid_step)?.with_max_points(opts.max_points);
    let channels = sample_channels(opts);

    let instances = channels
        .into_par_iter()
        .enumerate()
        .map(|(index, channel)| -> Result<InstanceReport> {
            let report = grid.run(&channel)?;
            let optimum = max_sum_rate(&channel);
            let at_optimum = max_sum_lp(&build_polytope(&channel, &optimum.split)?).value;
            let optimal_split_gap = (at_optimum - optimum.sum_rate).abs();
            let passed = report.max_violation <= opts.tolerance && optimal_split_gap <= tolerance::IDENTITY;
            Ok(InstanceReport {
                index,
                channel,
                closed_form: report.closed_form,
                best_sum: report.best_sum,
                best_split: report.best_split,
                max_violation: report.max_violation,
                optimal_split_gap,
                passed,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let worst = |f: fn(&InstanceReport) -> f64| instances.iter().map(f).reduce(f64::max);
    Ok(VerifyReport {
        schema_version: SCHEMA_VERSION,
        generator: "ChaCha8Rng::seed_from_u64",
        seed: opts.seed,
        count: opts.count,
        grid_step: opts.grid_step,
        tolerance: opts.tolerance,
        worst_max_violation: worst(|r| r.max_violation),
        worst_optimal_split_gap: worst(|r| r.optimal_split_gap),
        failures: instances.iter().filter(|r| !r.passed).map(|r| r.index).collect(),
        instances,
    })
}
