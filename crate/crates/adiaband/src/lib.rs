//! Time- and space-adiabatic perturbation theory to second order, on desk-scale
//! finite-dimensional models: superadiabatic projectors, effective intraband
//! Hamiltonians, intertwining isometries, grid-based Weyl quantization, the
//! Born-Oppenheimer reduction, and semiclassical spin transport. An experiment
//! harness sweeps the adiabatic parameter and fits log-log convergence slopes
//! against exact reference propagation.

pub mod error;
pub mod harness;
pub mod linalg;
pub mod ode;
pub mod semiclassical;
pub mod space_adiabatic;
pub mod spectral;
pub mod time_adiabatic;
pub mod weyl;

pub use error::{Error, Result};
