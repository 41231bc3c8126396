//! Criterion benchmarks for `relper-core`; see `benches/periods.rs`.
