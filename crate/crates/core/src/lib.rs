//! Random thin sets of integers and the harmonic-analysis functionals used to
//! study them.
//!
//! * [`seq`]: selector schedules, base sequences, block schedules, sampling.
//! * [`relations`]: signed relations, quasi-independence, extraction.
//! * [`fourier`]: trigonometric polynomials, norms, kernels, Riesz products.
//! * [`diagnostics`]: Weyl averages, growth fits, Monte Carlo bound checks.

pub mod diagnostics;
pub mod error;
pub mod fourier;
pub mod numeric;
pub mod relations;
pub mod seq;

pub use error::{Error, Result};
pub use seq::IntegerSet;
