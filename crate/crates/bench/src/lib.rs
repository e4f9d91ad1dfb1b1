//! Criterion benchmarks for `cyclic-ca`; see `benches/`.
