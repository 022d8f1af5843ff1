//! Numerical laboratory for decoherence-driven measurement.
//!
//! The crate is layered bottom-up:
//!
//! * [`hilbert`] holds dense complex linear algebra over small composite
//!   spaces: states, operators, density matrices, partial trace, purity and
//!   Hermitian-generated time evolution.
//! * [`decoherence`] builds branch-conditional pointer states as product
//!   forms over `N` particles, the premeasurement map, and closed-form
//!   overlaps and reduced system matrices that scale to large `N`.
//! * [`experiments`] wraps those into named scenario runners (qubit
//!   measurement, macroscopic superposition, decay curves, Born sampling)
//!   registered behind a common [`experiments::Experiment`] trait.
//! * [`selftest`] runs the randomized invariant suite used by the
//!   `selftest` CLI subcommand.

pub mod decoherence;
pub mod experiments;
pub mod hilbert;
pub mod random;
pub mod selftest;
pub mod tolerance;

pub use num_complex::Complex64 as C64;
