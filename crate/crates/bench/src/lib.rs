//! Criterion benchmarks for `entorder`; see `benches/`.
