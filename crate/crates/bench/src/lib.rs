//! Criterion benchmarks for the randpivot workspace live in benches/.
