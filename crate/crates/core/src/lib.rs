//! Spectral Galerkin solver for the incompressible Navier-Stokes equations on
//! the periodic box `[0, L]^3`, together with an a-posteriori certificate that
//! decides, from a computed trajectory alone, whether the exact problem has a
//! strong solution on the same time interval.
//!
//! The crate is organized bottom-up:
//!
//! - [`spectral`]: lattices, divergence-free Fourier fields, Stokes operator
//!   powers, `V^m` norms and Galerkin projections.
//! - [`nonlinear`]: the projected convection term `B(u, v)`, a direct
//!   convolution oracle and bounds on the constants of the nonlinear
//!   inequalities.
//! - [`solver`]: scenario configuration, initial data, forcing and the
//!   integrating-factor RK4 integrator for the Galerkin system.
//! - [`certificate`]: the Riccati comparison lemma, the robustness condition,
//!   the a-posteriori test and the refinement loop.
//! - [`io`]: configuration files, the binary snapshot format and reports.

pub mod certificate;
pub mod error;
pub mod io;
pub mod nonlinear;
pub mod solver;
pub mod spectral;

pub use error::{Error, Result};
