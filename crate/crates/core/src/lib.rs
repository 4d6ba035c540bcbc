//! Numerical analysis of the principal Dirichlet eigenvalue of
//! centrally symmetric convex bodies and their intersections.
//!
//! The crate provides three cooperating layers:
//!
//! * [`geometry`] — convex bodies given by their gauge (Minkowski
//!   functional), composite regions (translate / scale / intersect /
//!   Minkowski average), boundary sampling, and sampling-based
//!   inclusion falsification.
//! * [`spectral`] — a deterministic eigenvalue oracle: finite-difference
//!   discretization of `-½Δ` with Dirichlet exclusion on a masked grid,
//!   inverse power iteration with conjugate-gradient inner solves, and
//!   Richardson extrapolation for error control.
//! * [`stochastic`] — a probabilistic oracle: Brownian exit-time
//!   simulation with bridge-corrected boundary crossing, survival-curve
//!   estimation, and the exponential decay rate of survival
//!   probabilities.
//!
//! [`verifier`] orchestrates both oracles into named checks of the
//! eigenvalue relations (subadditivity over intersections, domain
//! monotonicity, scaling homogeneity, translation symmetry,
//! log-concavity of exit probabilities, and the `√2`-inclusion of the
//! set difference in the scaled intersection), each returning a
//! [`verdict::Verdict`] with a quantified margin and uncertainty.
//!
//! The crate is `no_std`-compatible (with `alloc`); the default `std`
//! feature only switches float math from `libm` to the faster intrinsic
//! implementations. All computations are deterministic functions of
//! their inputs and seeds.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

mod fmath;

pub mod geometry;
pub mod rng;
pub mod spectral;
pub mod stochastic;
pub mod verdict;
pub mod verifier;
