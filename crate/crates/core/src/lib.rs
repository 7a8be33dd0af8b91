//! Spectra of the radial eigenproblem
//! `u'' + u'/x - (gamma^2/x^2) u - delta x u - x^2 u + W u = 0`.
//!
//! Two independent routes are provided: exact polynomial solutions from
//! truncating the Frobenius series ([`frobenius`]), which exist only at
//! isolated values of `delta`, and the full discrete spectrum at any `delta`
//! from a Rayleigh-Ritz calculation ([`variational`]). A finite-difference
//! solver ([`oracle`]) cross-checks the latter, and [`analysis`] ties the
//! pieces together.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cli;
pub mod error;
pub mod frobenius;
pub mod model;
pub mod oracle;
pub mod poly;
pub mod variational;

pub use error::{Error, Result};
pub use model::{DimensionlessModel, PhysicalParameters};
