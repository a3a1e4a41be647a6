// `!(x > 0.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dim;
pub mod error;
pub mod hconv;
pub mod herglotz;
pub mod quad;
pub mod radial_toeplitz;
pub mod specfun;
pub mod sphere_op;
pub mod symbol_lab;

pub use dim::Dim;
pub use error::{Error, Result};

/// Library version recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
