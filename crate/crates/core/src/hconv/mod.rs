//! Multiplication-type Toeplitz operators `I a I*` on the sphere side and the
//! h-convolution of Herglotz fields.

mod algebra;
mod conv;
mod mult;
mod symbol;

pub use algebra::{algebra_checks, AlgebraReport, CommutatorNorm, NormRung};
pub use conv::{
    hconv_at, hconv_density, hconvolve, verify_factorization, FactorizationReport, HConvolution, LadderRung,
    ANALYSIS_RADII, LADDER_TOLERANCE,
};
pub use mult::{kernel_field, mult_nodal_matrix, mult_toeplitz_apply, mult_toeplitz_matrix, MultApply};
pub use symbol::{SphereProfile, SphereSymbol};
