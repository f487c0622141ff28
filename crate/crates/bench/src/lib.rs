//! Criterion benchmarks for the Bessel kernels and eigenvalue solvers live in `benches/`.
