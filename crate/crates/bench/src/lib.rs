//! Benchmark-only crate; see `benches/operators.rs`.
