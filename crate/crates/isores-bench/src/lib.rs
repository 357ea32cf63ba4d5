//! Criterion benchmarks for the isoresidual counting library.
//!
//! This crate has no library API of its own; run the suite with
//! `cargo bench -p isores-bench`.  The benchmarks cover the four hot paths:
//! the subset expansion of the degree, the full signed partition sum of a
//! fiber count, resonant-subset enumeration, and cyclotomic multiplication.
