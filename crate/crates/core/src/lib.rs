//! Symmetry analysis toolkit for the primitive equations of atmospheric
//! dynamics in pressure coordinates.

pub mod cli;
pub mod error;
pub mod fields;
pub mod jet;
pub mod liealg;
pub mod quad;
pub mod reduction;
pub mod residual;
pub mod scalar_fn;
pub mod transforms;

pub use error::{Error, Result};
