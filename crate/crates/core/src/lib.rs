//! Numerical laboratory for Dirichlet Laplacian spectra on planar and box
//! domains: discrete eigensolves against closed-form oracles, eigenvalue
//! counting and its Weyl asymptotics, pointwise spectral-function diagnostics,
//! and Fourier-Tauberian bound checks on the frequency line.

pub mod config;
pub mod eigensolve;
pub mod error;
pub mod geometry;
pub mod operator;
pub mod oracles;
pub mod runner;
pub mod spectral;
pub mod svg;
pub mod tauberian;

pub use error::{Error, Result};
