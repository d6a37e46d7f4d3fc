//! Benchmark-only crate; see `benches/sofa.rs`.
