//! Pseudospectral laboratory for a generalized two-component Camassa-Holm
//! system on the periodic torus `[0, 2pi)`.
//!
//! The system couples two fields `u`, `v` through transport terms `v^p u_x`,
//! `u^q v_x` and smoothing terms built from the Helmholtz inverse
//! `(1 - d_xx)^{-1}`, with integer powers `p, q >= 1` and real couplings
//! `a, b`. The crate provides
//!
//! - [`spectral`]: Fourier grids, multiplier operators and Sobolev norms,
//! - [`model`]: the nonlocal right-hand side of the system,
//! - [`integrator`]: fixed-step RK4 time evolution with a blow-up guard,
//! - [`ansatz`]: the explicit family of approximate solutions, their
//!   residuals and the predicted decay exponents,
//! - [`experiments`]: the residual-decay, difference-growth and
//!   nonuniform-dependence drivers with CSV/JSON reporting.
//!
//! The `gch2` binary exposes the experiment drivers on the command line.

pub mod ansatz;
pub mod experiments;
pub mod integrator;
pub mod model;
pub mod spectral;
