//! Flux Reconstruction on stretched and warped grids.
//!
//! The crate has two halves. The analysis half builds the semi-discrete FR
//! operator on a geometrically stretched 1D grid and extracts modified phase
//! velocities, filter kernels, points-per-wavelength and Runge-Kutta CFL
//! limits. The solver half runs the same schemes in the time domain: 1D linear
//! advection (FR and finite differences, measured through FFT transfer
//! functions) and 2D Euler on jittered quadrilateral meshes (FR and a MUSCL
//! finite-volume baseline) with the isentropic convecting vortex.

pub mod advect1d;
pub mod cli;
pub mod error;
pub mod euler2d;
pub mod linalg;
pub mod mesh;
pub mod reference;
pub mod spectral;
pub mod stability;

pub use error::{Error, Result};
pub use reference::{CorrectionKind, PointSet, ReferenceElement};
