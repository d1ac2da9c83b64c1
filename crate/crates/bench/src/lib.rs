//! Criterion benchmarks for `sdt-core`; see `benches/`.
