//! Exact counting quantities and exponential sums over prime fields F_p.
//!
//! The crate computes, exactly where the quantity is an integer and to
//! controlled floating-point accuracy otherwise:
//!
//! - arithmetic energies E*(U, V), E*_3(U, V) and their weighted-function
//!   versions, for all four laws +, -, *, /;
//! - difference-product counts D, the within-set variant D-tilde, the
//!   bilinear count N(U, V, W), collinear triples and quadruples of grids,
//!   and unit-line incidences;
//! - trilinear sums with per-element or pairwise weights, and trinomial
//!   multiplicative-character sums.
//!
//! Every counting operation has two routes: an `Oracle` route built from
//! literal tuple enumeration (or naive quadratic loops) and a `Fast` route
//! built on exact transforms. The two must agree bit-for-bit on integers.

pub mod energy;
pub mod error;
pub mod expsum;
pub mod field;
pub mod rng;
pub mod sets;
pub mod transform;

pub use error::{Error, Result};
pub use field::{
    additive_dft, mult_convolve_complex, mult_convolve_exact, op_convolve_exact, ArithOp,
    ComplexVec, FieldCtx, Strategy,
};
pub use sets::{diff_set, prod_set, rep_fn, FpSet, RepFn};
