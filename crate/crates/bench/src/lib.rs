//! Criterion benchmarks for `gaussian-eof`; see `benches/`.
