//! Symbol-level constructions: cut-off windows and degenerate parts, spatial
//! sesquilinear forms, boundedness constants and decay checks.

mod bounds;
mod compact;
mod form;
mod window;

pub use form::{
    form_matrix, form_matrix_on, form_quadrature, l1_norm, FormEstimate, FormGrid, FormMatrix, GeneralProfile,
    RadialProfile, SpatialSymbol, TAIL_TOLERANCE,
};
pub use window::{cutoff_transform, degenerate_part, degenerate_part_with, CutoffWindow, DegenerateSymbol, INNER_RADIUS};
pub use bounds::{
    argf_check, bounds_report, boundedness_constant, hd_check, Admissibility, ArgfReport, BoundednessConstant,
    BoundsReport, HdReport, ARGF_LEVELS,
};
pub use compact::{compactness_probe, CompactnessReport, DECAY_WINDOW, SCHATTEN_EXPONENTS, SUPERPOLY_SLOPE};
