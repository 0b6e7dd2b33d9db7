//! Command implementations behind the `cgzic` binary. Every command returns
//! plain data; `main.rs` only parses flags and writes output.

pub mod commands;
pub mod output;
pub mod sweep;
pub mod verify;

pub use commands::{analyze, decompose, oracle, parse_channel, AnalyzeOutput, OracleOutput};
pub use output::{round_sig, to_json, SCHEMA_VERSION};
pub use sweep::{regime_map, write_regime_csv, AxisRange, RegimeCell, SweepSpec};
pub use verify::{verify, VerifyOptions, VerifyReport};
