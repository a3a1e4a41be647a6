//! The operator `f -> pi/(2pi)^{d/2} int a_hat(eta - xi) f(xi) dS(xi)` on
//! `L2` of the unit sphere: symbol transforms, nodal and harmonic matrices,
//! eigenvalues and norms.

mod eigen;
mod matrix;
mod transform;

pub use eigen::{eigen_hermitian, operator_norm, Eigen, DENSE_NORM_LIMIT, MAX_SWEEPS, OFF_DIAGONAL_TOL};
pub use matrix::{
    build_harmonic, build_nodal, cap_integral, circle_eigs, harmonic_change, nodal_to_harmonic, write_spectrum_csv,
    Basis, OperatorMatrix, MAX_REACH,
};
pub use transform::{fourier_radial, GeneralFn, Provenance, SymbolTransform, TransformKind};
