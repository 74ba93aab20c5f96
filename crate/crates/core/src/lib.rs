//! Spectral quasi-reversibility for the backward-in-time strongly damped wave
//! equation
//!
//! ```text
//! u_tt + u_t - Δu - Δu_t = 0   on (0, L) × (0, T),   u = 0 on the boundary,
//! u(T) = f0,  u_t(T) = f1.
//! ```
//!
//! Everything is expressed in the Dirichlet sine eigenbasis of the interval,
//! where the perturbing operator `Q` and the stabilized operator `P = 2Δ + Q`
//! are diagonal. The regularized backward problem then decouples into one
//! constant-coefficient ODE per mode and is solved in closed form; an RK4
//! stepper and a Picard iterator on the weighted `v = e^{ρ(t-T)} u` system
//! are kept as independent oracles.
//!
//! Modules:
//! - [`spectral`]: eigenbasis, coefficient fields, norms, trajectories.
//! - [`operators`]: regularization state, `Q`/`P`, conditional-estimate checks.
//! - [`solvers`]: forward/naive/regularized solves, v-transform, oracles, energy.
//! - [`experiments`]: noise, assumptions, error metrics, sweeps.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod experiments;
pub mod operators;
mod par;
pub mod rng;
pub mod solvers;
pub mod spectral;

pub use error::{Error, Result};
pub use operators::RegConfig;
pub use spectral::{EigenBasis, SpectralField, Trajectory};
