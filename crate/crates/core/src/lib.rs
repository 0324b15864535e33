//! Exact computations with free-fermion, twisted free-fermion and lattice
//! vertex operator superalgebra modules.
//!
//! Everything here is exact: coefficients live in cyclotomic fields with
//! arbitrary precision rational coordinates, and series are truncated by
//! exponent rather than approximated.
#![no_std]
extern crate alloc;

pub mod correspondence;
pub mod cyclotomic;
pub mod error;
pub mod free_fermion;
pub mod lattice_vosa;
pub mod linalg;
pub mod qseries;
pub mod superfock;
pub mod twisted_fermion;
pub mod vertex;

pub use error::{Error, Result};

/// Exact rational used for exponents, levels and weights.
pub type Q = num_rational::Ratio<i64>;
