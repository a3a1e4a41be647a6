//! Special functions: Gamma, Bessel `J`, Gauss–Legendre rules and real spherical harmonics.

mod bessel;
mod gamma;
mod harmonic;
mod legendre;

pub use bessel::{bessel_j, bessel_j_orders, bessel_j_reduced, ASYMPTOTIC_MIN_X};
pub use gamma::{gamma_fn, gamma_ratio, ln_gamma};
pub use harmonic::{
    basis_len, harmonic_indices, harmonics_upto, multiplicity, sph_harmonic, HarmonicIndex,
};
pub use legendre::{gauss_legendre, GaussLegendre, MAX_NODES};
