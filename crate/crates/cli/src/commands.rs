use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use cgzic_core::{
    classify_with_tolerance, lemma2_segment, max_sum_rate, ChannelConfig, ChannelSpec, GridOracle, GridPoint,
    OracleReport, RegimeReport, Segmentation, SumRateResult,
};
use serde::Serialize;

use crate::output::SCHEMA_VERSION;

/// Reads a channel from inline JSON (anything starting with `{`) or from a
/// file path, normalizing general-form channels.
pub fn parse_channel(arg: &str) -> Result<ChannelConfig> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_owned()
    } else {
        fs::read_to_string(Path::new(arg)).with_context(|| format!("reading channel file {arg}"))?
    };
    let value: serde_json::Value = serde_json::from_str(&text).context("parsing channel JSON")?;
    // dispatch by hand so field errors are not swallowed by the untagged enum
    let spec = if value.get("general").is_some() {
        ChannelSpec::General {
            general: serde_json::from_value(value["general"].clone()).context("invalid general channel")?,
        }
    } else {
        ChannelSpec::Standard(serde_json::from_value(value).context("invalid channel")?)
    };
    Ok(spec.into_standard()?)
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum AnalyzeOutput {
    Regime {
        schema_version: u32,
        channel: ChannelConfig,
        #[serde(flatten)]
        report: RegimeReport,
    },
    Chain {
        schema_version: u32,
        channel: ChannelConfig,
        sum_rate: SumRateResult,
        segmentation: Segmentation,
    },
}

/// Regime report for three users without a very strong link, otherwise the
/// closed-form sum rate together with the chain decomposition.
pub fn analyze(channel: &ChannelConfig, tolerance: f64) -> Result<AnalyzeOutput> {
    let three_user = channel.users() == 3
        && channel
            .gains()
            .iter()
            .enumerate()
            .all(|(i, &a)| a < channel.very_strong_threshold(i));
    if three_user {
        return Ok(AnalyzeOutput::Regime {
            schema_version: SCHEMA_VERSION,
            channel: channel.clone(),
            report: classify_with_tolerance(channel, tolerance)?,
        });
    }
    Ok(AnalyzeOutput::Chain {
        schema_version: SCHEMA_VERSION,
        channel: channel.clone(),
        sum_rate: max_sum_rate(channel),
        segmentation: lemma2_segment(channel),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct DecomposeOutput {
    pub schema_version: u32,
    #[serde(flatten)]
    pub segmentation: Segmentation,
}

pub fn decompose(channel: &ChannelConfig) -> DecomposeOutput {
    DecomposeOutput {
        schema_version: SCHEMA_VERSION,
        segmentation: lemma2_segment(channel),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleOutput {
    pub schema_version: u32,
    pub channel: ChannelConfig,
    #[serde(flatten)]
    pub report: OracleReport,
    #[serde(skip)]
    pub points: Vec<GridPoint>,
}

pub fn oracle(channel: &ChannelConfig, grid_step: f64, max_points: u128) -> Result<OracleOutput> {
    let grid = GridOracle::new(grid_step)?.with_max_points(max_points);
    let points = grid.evaluate(channel)?;
    Ok(OracleOutput {
        schema_version: SCHEMA_VERSION,
        channel: channel.clone(),
        report: grid.summarize(channel, &points),
        points,
    })
}

/// Per-grid-point dump: `gamma_1..gamma_K,lp_value`.
pub fn write_grid_csv<W: std::io::Write>(points: &[GridPoint], writer: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(writer);
    let k = points.first().map_or(0, |p| p.split.len());
    let mut header: Vec<String> = (1..=k).map(|i| format!("gamma_{i}")).collect();
    header.push("lp_value".to_owned());
    out.write_record(&header)?;
    for p in points {
        let mut row: Vec<String> = p.split.gamma().iter().map(|g| g.to_string()).collect();
        row.push(crate::output::format_rate(p.lp_value));
        out.write_record(&row)?;
    }
    out.flush()?;
    Ok(())
}
