//! Regime map over a grid of `(a₁, a₂)` at fixed powers.

use anyhow::{bail, Result};
use cgzic_core::{classify_with_tolerance, max_sum_rate, ChannelConfig, SplittingRegime};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::output::format_rate;

/// `steps` evenly spaced points on the half-open range `[min, max)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisRange {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl AxisRange {
    pub fn points(&self) -> Vec<f64> {
        (0..self.steps)
            .map(|i| self.min + (self.max - self.min) * i as f64 / self.steps as f64)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub powers: [f64; 3],
    pub a1: AxisRange,
    pub a2: AxisRange,
    /// Allow axes that reach into the very strong region.
    pub allow_very_strong: bool,
    /// Widening applied to every regime inequality.
    pub tolerance: f64,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if let Some(p) = self.powers.iter().find(|p| !p.is_finite() || **p <= 0.0) {
            bail!("power {p} must be positive and finite");
        }
        for (name, axis, limit) in [
            ("a1", self.a1, (1.0 + self.powers[1]).sqrt()),
            ("a2", self.a2, (1.0 + self.powers[2]).sqrt()),
        ] {
            if axis.steps == 0 {
                bail!("{name}: at least one step is required");
            }
            if !(axis.min >= 0.0 && axis.min < axis.max && axis.max.is_finite()) {
                bail!("{name}: need 0 <= min < max, got [{}, {})", axis.min, axis.max);
            }
            if axis.max > limit && !self.allow_very_strong {
                bail!("{name}: max {} exceeds the very strong threshold {limit}; pass --allow-very-strong", axis.max);
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeCell {
    pub a1: f64,
    pub a2: f64,
    pub splitting_regime: SplittingRegime,
    /// A capacity status name, or `VeryStrong`.
    pub capacity_status: String,
    pub achievable: f64,
    pub upper: f64,
}

/// Label for cells with a very strong link.
pub const VERY_STRONG: &str = "VeryStrong";

pub fn classify_cell(powers: [f64; 3], a1: f64, a2: f64, tolerance: f64) -> Result<RegimeCell> {
    let cfg = ChannelConfig::new(vec![a1, a2], powers.to_vec())?;
    let very_strong = cfg.gains().iter().enumerate().any(|(i, &a)| a >= cfg.very_strong_threshold(i));
    if very_strong {
        let result = max_sum_rate(&cfg);
        let g = result.split.gamma();
        let bound = powers.iter().map(|&p| 0.5 * p.ln_1p() / std::f64::consts::LN_2).sum();
        return Ok(RegimeCell {
            a1,
            a2,
            splitting_regime: SplittingRegime::from_split(g[0], g[1]),
            capacity_status: VERY_STRONG.to_owned(),
            achievable: result.sum_rate,
            upper: bound,
        });
    }
    let report = classify_with_tolerance(&cfg, tolerance)?;
    Ok(RegimeCell {
        a1,
        a2,
        splitting_regime: report.splitting_regime,
        capacity_status: report.capacity_status.as_str().to_owned(),
        achievable: report.achievable,
        upper: report.upper,
    })
}

/// One cell per grid point, `a₁` outer and `a₂` inner.
pub fn regime_map(spec: &SweepSpec) -> Result<Vec<RegimeCell>> {
    spec.validate()?;
    let a2_points = spec.a2.points();
    let pairs: Vec<(f64, f64)> = spec
        .a1
        .points()
        .into_iter()
        .flat_map(|a1| a2_points.iter().map(move |&a2| (a1, a2)))
        .collect();
    pairs
        .into_par_iter()
        .map(|(a1, a2)| classify_cell(spec.powers, a1, a2, spec.tolerance))
        .collect()
}

pub fn write_regime_csv<W: std::io::Write>(cells: &[RegimeCell], writer: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(writer);
    out.write_record(["a1", "a2", "splitting_regime", "capacity_status", "achievable", "upper"])?;
    for c in cells {
        out.write_record([
            c.a1.to_string(),
            c.a2.to_string(),
            c.splitting_regime.as_str().to_owned(),
            c.capacity_status.clone(),
            format_rate(c.achievable),
            format_rate(c.upper),
        ])?;
    }
    out.flush()?;
    Ok(())
}
