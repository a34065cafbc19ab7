//! Criterion benchmarks for the qfeedback engine; see `benches/`.
