use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use cgzic_cli::commands::write_grid_csv;
use cgzic_cli::{analyze, decompose, oracle, parse_channel, regime_map, to_json, verify, write_regime_csv};
use cgzic_cli::{AxisRange, SweepSpec, VerifyOptions};
use cgzic_core::polytope::DEFAULT_MAX_GRID_POINTS;
use clap::{Parser, Subcommand};

/// Sum-rate and capacity analysis for cascade Gaussian Z-interference channels.
#[derive(Parser)]
#[command(name = "cgzic", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Regime report (3 users) or sum rate and decomposition (other K).
    Analyze {
        /// Channel JSON, inline or as a file path.
        #[arg(long)]
        channel: String,
        /// Widening of every regime inequality.
        #[arg(long, default_value_t = 0.0)]
        tolerance: f64,
    },
    /// Check the closed form against the grid oracle on random channels.
    Verify {
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long, default_value_t = 2)]
        k_min: usize,
        #[arg(long, default_value_t = 3)]
        k_max: usize,
        #[arg(long, default_value_t = 0.05)]
        grid_step: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 0.1)]
        p_min: f64,
        #[arg(long, default_value_t = 100.0)]
        p_max: f64,
        /// Allowed excess of a grid LP value over the closed form.
        #[arg(long, default_value_t = 1e-6)]
        tolerance: f64,
        /// Check this channel instead of sampling.
        #[arg(long)]
        channel: Option<String>,
        #[arg(long, default_value_t = DEFAULT_MAX_GRID_POINTS)]
        max_points: u128,
        /// Write the JSON report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// CSV regime map of a 3-user channel over (a1, a2).
    RegimeMap {
        /// Powers P1,P2,P3.
        #[arg(long, value_delimiter = ',', num_args = 3, default_values_t = [3.0, 3.0, 3.0])]
        powers: Vec<f64>,
        #[arg(long, default_value_t = 0.0)]
        a1_min: f64,
        #[arg(long, default_value_t = 2.0)]
        a1_max: f64,
        #[arg(long, default_value_t = 100)]
        a1_steps: usize,
        #[arg(long, default_value_t = 0.0)]
        a2_min: f64,
        #[arg(long, default_value_t = 2.0)]
        a2_max: f64,
        #[arg(long, default_value_t = 100)]
        a2_steps: usize,
        #[arg(long)]
        allow_very_strong: bool,
        #[arg(long, default_value_t = 0.0)]
        tolerance: f64,
        /// CSV destination; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Very-strong removal and prefix cutting of a chain.
    Decompose {
        #[arg(long)]
        channel: String,
    },
    /// Grid oracle report for one channel.
    Oracle {
        #[arg(long)]
        channel: String,
        #[arg(long, default_value_t = 0.05)]
        grid_step: f64,
        #[arg(long, default_value_t = DEFAULT_MAX_GRID_POINTS)]
        max_points: u128,
        /// Optional per-grid-point CSV dump.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(path) => {
            let mut file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
            writeln!(file, "{text}")?;
        }
        None => println!("{text}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Analyze { channel, tolerance } => {
            let cfg = parse_channel(&channel)?;
            emit(&to_json(&analyze(&cfg, tolerance)?)?, None)?;
        }
        Command::Verify {
            count,
            k_min,
            k_max,
            grid_step,
            seed,
            p_min,
            p_max,
            tolerance,
            channel,
            max_points,
            out,
        } => {
            let opts = VerifyOptions {
                count,
                k_min,
                k_max,
                grid_step,
                seed,
                p_min,
                p_max,
                tolerance,
                channel: channel.as_deref().map(parse_channel).transpose()?,
                max_points,
            };
            let report = verify(&opts)?;
            emit(&to_json(&report)?, out.as_ref())?;
            if !report.passed() {
                eprintln!("{} of {} instances failed", report.failures.len(), report.count);
                return Ok(false);
            }
        }
        Command::RegimeMap {
            powers,
            a1_min,
            a1_max,
            a1_steps,
            a2_min,
            a2_max,
            a2_steps,
            allow_very_strong,
            tolerance,
            out,
        } => {
            let spec = SweepSpec {
                powers: [powers[0], powers[1], powers[2]],
                a1: AxisRange { min: a1_min, max: a1_max, steps: a1_steps },
                a2: AxisRange { min: a2_min, max: a2_max, steps: a2_steps },
                allow_very_strong,
                tolerance,
            };
            let cells = regime_map(&spec)?;
            match out {
                Some(path) => {
                    let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
                    write_regime_csv(&cells, file)?;
                }
                None => write_regime_csv(&cells, io::stdout().lock())?,
            }
        }
        Command::Decompose { channel } => {
            let cfg = parse_channel(&channel)?;
            emit(&to_json(&decompose(&cfg))?, None)?;
        }
        Command::Oracle { channel, grid_step, max_points, out } => {
            let cfg = parse_channel(&channel)?;
            let result = oracle(&cfg, grid_step, max_points)?;
            if let Some(path) = out {
                let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
                write_grid_csv(&result.points, file)?;
            }
            emit(&to_json(&result)?, None)?;
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
