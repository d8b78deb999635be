//! Numerical detection of embedded components of polynomial ideals.
//!
//! Given generators of an ideal, a suspect point, and fixtures describing the
//! components through that point, the crate decides whether the point carries
//! a true embedded component or is a pseudocomponent. Everything is driven by
//! truncated Macaulay dual spaces with SVD-thresholded kernels: local Hilbert
//! data and staircases, colon ideals and a local membership test, deflation
//! systems, ideal truncations and witness polynomials.

pub mod colon;
pub mod config;
pub mod deflate;
pub mod dual;
pub mod embedded;
pub mod error;
pub mod interp;
mod linalg;
pub mod oracle;
pub mod parse;
pub mod poly;
pub mod problem;
pub mod ring;
pub mod staircase;

pub use config::NumericalConfig;
pub use dual::{DualBasis, DualFunctional, Point};
pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use poly::Polynomial;
pub use ring::{ExpVec, Ring};
