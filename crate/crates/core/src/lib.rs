//! Spectral Galerkin toolkit for the stochastic Navier-Stokes equations on
//! the two-dimensional torus: Fourier lattice and Besov norms, the Gaussian
//! invariant measure, the quadratic nonlinearity, stochastic time stepping,
//! pathwise uniqueness diagnostics and an experiment harness.

pub mod dynamics;
pub mod error;
pub mod harness;
pub mod measure;
pub mod nonlinear;
pub mod report;
pub mod rng;
pub mod spectral;
pub mod stats;
pub mod system;
pub mod uniqueness;

pub use error::{Error, Result};
pub use system::GalerkinSystem;
