//! Benchmarks for scp-core; see `benches/`.
