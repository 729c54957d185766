//! Benchmarks for the cyclolab kernels live under `benches/`.
