//! Exact-arithmetic toolkit for fixed points of weak contractions on
//! partially ordered G-metric spaces.
//!
//! The crate is `no_std` and only needs `alloc`. It provides:
//!
//! - [`space`]: carriers, partial orders, G-metrics, self-maps and their
//!   axiom checks;
//! - [`control`]: piecewise-linear control functions ψ and φ, their class
//!   checks, and the constructions that adjust φ;
//! - [`contraction`]: the contraction functionals and exhaustive inequality
//!   checks with violation witnesses;
//! - [`solver`]: Picard orbits, fixed-point enumeration and hypothesis checks.
#![no_std]

extern crate alloc;

pub mod contraction;
pub mod control;
pub mod scalar;
pub mod solver;
pub mod space;
pub mod verdict;

pub use scalar::Scalar;
pub use space::{PointId, Space};
pub use verdict::{Provenance, Verdict};
