//! Boundary matrices and Betti numbers over prime fields.
//!
//! Simplices are indexed in colex order, which sorts them by their latest
//! vertex. Every prefix of that order is the subcomplex `X^(t)` spanned by the
//! first `t` nodes, so one left-to-right reduction yields ranks, and hence
//! Betti numbers, at every snapshot time.

mod betti;
mod boundary;
mod bounds;
mod dense;
mod field;
mod reduce;

pub use betti::{
    betti, betti_at_times, component_count, cross_field_betti, euler_check, relative_betti, BettiVector, CrossField,
    EulerCheck,
};
pub use boundary::{boundary_matrices, check_boundary_squared, BoundaryMatrix, Column};
pub use bounds::{
    b_ik_indicator, decomposition_check, link_betti_sum, link_betti_sum_simple, lower_link, morse_bounds_beta1,
    DecompositionCheck, LinkBettiSum, MorseBounds,
};
pub use dense::{betti_dense_oracle, DENSE_ORACLE_CAP};
pub use field::FieldSpec;
pub use reduce::{reduce, Reduction};
