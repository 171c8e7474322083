//! Radially symmetric compressible Navier–Stokes–Poisson flows with
//! BD-type viscosity `mu = rho^alpha`, `lambda = (alpha - 1) rho^alpha`,
//! solved in Lagrangian mass coordinates on the unit mass interval.
//!
//! The crate is split the way a run is assembled:
//!
//! * [`admissibility`] evaluates the parameter regions (`A_set`, threshold
//!   curves, exponent windows) under which global existence is known.
//! * [`state`] and [`initial`] hold the staggered mass grid and the fluid
//!   state, and build initial data.
//! * [`physics`] assembles the discrete right-hand sides.
//! * [`poisson`] reconstructs the potential from the density.
//! * [`solver`] advances the state in time and watches for blow-up.
//! * [`diagnostics`] evaluates the monitored estimate functionals.

// `!(x > y)` is used on purpose throughout: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod admissibility;
pub mod diagnostics;
pub mod error;
pub mod initial;
pub mod manufactured;
pub mod physics;
pub mod poisson;
pub mod quadrature;
pub mod solver;
pub mod state;

pub use error::{Error, Result};
