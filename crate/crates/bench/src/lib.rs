//! Criterion benchmarks for `cgzic-core`; see `benches/`.
