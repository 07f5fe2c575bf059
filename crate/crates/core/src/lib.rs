//! Phase-space (discrete Wigner) analysis of continuous-time quantum walks.
//!
//! The crate is `no_std` and only needs an allocator. It covers:
//!
//! - [`netgen`]: ordered circulant rings, Watts–Strogatz rewiring and
//!   exponential site disorder, assembled into dense Hamiltonians.
//! - [`spectral`]: the analytic Bloch spectrum of rings and a dense
//!   symmetric eigensolver for everything else, plus degeneracy classes.
//! - [`wigner`]: instantaneous and long-time-limiting Wigner fields, with a
//!   circulant fast path, a general spectral path and the closed forms for
//!   the cycle graph.
//! - [`analysis`]: marginals, half-period asymmetry, transition
//!   probabilities and seeded ensemble averages.
//!
//! IO, file formats and the command line live in the `ctqw` crate.
#![no_std]

extern crate alloc;

pub mod analysis;
mod error;
mod linalg;
pub mod netgen;
pub mod spectral;
pub mod wigner;

pub use error::{Error, Result};
