//! Quadrature: semi-axis integrals with oscillatory tails, sphere grids and
//! ball averages.

mod ball;
mod rules;
mod semiaxis;
mod sphere;

pub use ball::{
    ball_average, ball_average_shells, ball_average_with, radial_nodes_for, radial_rule, MAX_RADIAL_NODES,
};
pub use rules::{
    algebraic_tail, dyadic_origin, levin_limit, panel_rule, panels, QuadEstimate, PANEL_NODES,
};
pub use semiaxis::{integrate_decaying, integrate_semiaxis, Acceleration, BlockEdges, TailPolicy};
pub use sphere::{sphere_grid, SphereGrid};
