//! Exact computer algebra for generalized complex and generalized Kähler
//! geometry on flat models (tori with Fourier coefficients, affine charts
//! with polynomial coefficients).

pub mod brackets;
pub mod coeff;
pub mod error;
pub mod gc;
pub mod identities;
pub mod linalg;
pub mod multivector;
pub mod poisson;
pub mod sample;
pub mod series;
pub mod stability;

pub use error::{GkError, Result};
