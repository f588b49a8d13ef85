//! Criterion benchmarks for structure sets, synthesis and the linear-algebra kernels; see `benches/`.
