//! Criterion benchmarks for the capacity formulas, the brute-force oracles
//! and the dynamical-map solvers. Run with `cargo bench -p qcapax-bench`.
