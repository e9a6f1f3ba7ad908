//! Criterion benchmarks for `tvpm-core`; see `benches/`.
