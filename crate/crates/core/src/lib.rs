//! Preferential attachment clique complexes.
//!
//! The crate is organised bottom-up:
//!
//! * [`graph`] generates affine preferential attachment multigraphs, either edge by
//!   edge or through the Polya-urn representation with independent Beta weights,
//!   and provides a brute-force law for small instances.
//! * [`complex`] collapses multigraphs to simple graphs, enumerates cliques into
//!   simplicial complexes, and hosts links, stars, octahedral spheres and the
//!   Barmak star-covering criterion.
//! * [`homology`] builds signed boundary matrices and computes absolute and
//!   relative Betti numbers over prime fields, with an independent dense oracle
//!   and the deterministic Morse and link-decomposition inequalities.
//! * [`experiments`] is the Monte Carlo harness: seeded sweeps, CCDF tail fits,
//!   two-sample KS statistics, growth-rate regressions and the phase classifier.
//! * [`verify`] bundles the invariant suites used by `paclique verify`.

pub mod complex;
pub mod error;
pub mod experiments;
pub mod graph;
pub mod homology;
pub mod rng;
pub mod verify;

pub use error::{Error, Result};
