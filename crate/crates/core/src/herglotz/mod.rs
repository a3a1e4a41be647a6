//! The Herglotz space: sphere densities, the synthesis operator and its
//! adjoint, the reproducing kernel and far-field asymptotics.

mod adjoint;
mod field;
mod kernel;
mod sphere_function;

pub use adjoint::{
    adjoint_resolution, analyze_field, b_star_average, far_field, far_field_residual, far_field_sphere_residual,
    finite_adjoint_multiplier, istar, istar_at, IstarEstimate, ISTAR_MIN_RADIUS,
};
pub use field::{radial_factors, synth, synth_integral, synth_on_sphere, Constants, HerglotzField};
pub use kernel::{kernel_series, repro_kernel, reproduce};
pub use sphere_function::SphereFunction;
