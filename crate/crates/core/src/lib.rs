//! Numerical laboratory for semiclassical eigenvalue bounds on rasterized
//! domains: regularized inradii, Riesz means of Laplace and Landau
//! eigenvalues, main terms, remainders, uncertainty masses and exact
//! finite-dimensional trace identities.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fourier;
pub mod geometry;
pub mod operators;
pub mod semiclassics;
pub mod abstract_traces;
pub mod uncertainty;
pub mod lab;

pub use error::{LabError, Result};
