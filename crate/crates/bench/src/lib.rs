//! Criterion benchmarks for `monadforge`; see `benches/`.
