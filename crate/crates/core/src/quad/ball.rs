use rayon::prelude::*;

use super::sphere::SphereGrid;
use crate::error::{Error, Result};
use crate::specfun::gauss_legendre;

/// Cap on radial nodes of ball grids.
pub const MAX_RADIAL_NODES: usize = 4096;

/// Radial node count used for a ball of radius `r`: four per unit length,
/// enough for the unit-wavelength oscillation of Helmholtz solutions.
pub fn radial_nodes_for(r: f64) -> usize {
    ((4.0 * r).ceil() as usize).clamp(16, MAX_RADIAL_NODES)
}

/// Radial Gauss–Legendre nodes on `[0, r]` with weights including `t^{d-1}`.
pub fn radial_rule(r: f64, nodes: usize, d: usize) -> Result<Vec<(f64, f64)>> {
    let rule = gauss_legendre(nodes)?;
    Ok(rule.mapped(0.0, r).map(|(t, w)| (t, w * t.powi(d as i32 - 1))).collect())
}

/// `R^{-1} int_{|x| < R} f(x) dx` by radial Gauss–Legendre times `grid`.
///
/// The radial node count is `ceil(4R)` clamped to `[16, 4096]`; use
/// [`ball_average_with`] for explicit control.
pub fn ball_average<F>(f: F, r: f64, grid: &SphereGrid) -> Result<f64>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    ball_average_with(f, r, grid, radial_nodes_for(r))
}

pub fn ball_average_with<F>(f: F, r: f64, grid: &SphereGrid, radial_nodes: usize) -> Result<f64>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidArgument(format!("ball radius must be positive, got {r}")));
    }
    let d = grid.d.get();
    let radial = radial_rule(r, radial_nodes, d)?;
    let shells: Vec<f64> = radial
        .par_iter()
        .map(|&(t, wt)| {
            let mut x = vec![0.0; d];
            let mut s = 0.0;
            for (p, w) in grid.points.iter().zip(&grid.weights) {
                for i in 0..d {
                    x[i] = t * p[i];
                }
                s += w * f(&x);
            }
            wt * s
        })
        .collect();
    Ok(shells.iter().sum::<f64>() / r)
}

/// Like [`ball_average`] but for integrands that are cheaper to evaluate a
/// whole sphere at a time: `shell(t)` returns `int_{S} f(t xi) dS(xi)`.
pub fn ball_average_shells<F>(shell: F, r: f64, d: usize, radial_nodes: usize) -> Result<f64>
where
    F: Fn(f64) -> f64 + Sync,
{
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidArgument(format!("ball radius must be positive, got {r}")));
    }
    let radial = radial_rule(r, radial_nodes, d)?;
    let parts: Vec<f64> = radial.par_iter().map(|&(t, wt)| wt * shell(t)).collect();
    Ok(parts.iter().sum::<f64>() / r)
}
