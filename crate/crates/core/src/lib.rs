//! Numerical laboratory for semiclassical oscillatory integrals at stable
//! simple caustics.

// `!(x > 0.0)` style checks are deliberate: they reject NaN too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod amplitudes;
pub mod catalog;
pub mod cli;
pub mod error;
pub mod fold;
pub mod oscint;
pub mod scaling;
pub mod torus;
pub mod verify;

pub use error::{Error, Result};
