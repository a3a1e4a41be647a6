use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::dim::Dim;
use crate::error::{Error, Result};
use crate::specfun::gauss_legendre;

/// Product quadrature on the unit sphere `S^{d-1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphereGrid {
    pub d: Dim,
    pub resolution: usize,
    /// Unit vectors, each of length `d`.
    pub points: Vec<Vec<f64>>,
    /// Surface-measure weights.
    pub weights: Vec<f64>,
}

impl SphereGrid {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn integrate<F: Fn(&[f64]) -> f64>(&self, f: F) -> f64 {
        self.points.iter().zip(&self.weights).map(|(p, w)| w * f(p)).sum()
    }

    /// Largest harmonic degree integrated exactly.
    pub fn exact_degree(&self) -> usize {
        self.resolution - 1
    }
}

/// Circle: `resolution` equispaced angles, exact for trigonometric polynomials
/// of degree `< resolution`. Sphere: `ceil(resolution / 2)` Gauss–Legendre
/// nodes in `cos(theta)` times `resolution` azimuths, exact for harmonics of
/// degree `< resolution`.
pub fn sphere_grid(d: Dim, resolution: usize) -> Result<SphereGrid> {
    if resolution < 4 {
        return Err(Error::InvalidArgument(format!("sphere grid resolution must be >= 4, got {resolution}")));
    }
    let mut points = Vec::new();
    let mut weights = Vec::new();
    match d {
        Dim::Two => {
            let w = 2.0 * PI / resolution as f64;
            for k in 0..resolution {
                let t = 2.0 * PI * k as f64 / resolution as f64;
                points.push(vec![t.cos(), t.sin()]);
                weights.push(w);
            }
        }
        Dim::Three => {
            let polar = gauss_legendre(resolution.div_ceil(2))?;
            let dphi = 2.0 * PI / resolution as f64;
            for (&z, &wz) in polar.nodes.iter().zip(&polar.weights) {
                let s = (1.0 - z * z).sqrt();
                for k in 0..resolution {
                    let phi = dphi * k as f64;
                    points.push(vec![s * phi.cos(), s * phi.sin(), z]);
                    weights.push(wz * dphi);
                }
            }
        }
    }
    Ok(SphereGrid { d, resolution, points, weights })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{harmonic_indices, harmonics_upto, sph_harmonic, HarmonicIndex};

    #[test]
    fn weights_sum_to_area() {
        let g = sphere_grid(Dim::Two, 64).unwrap();
        assert!((g.weights.iter().sum::<f64>() - 2.0 * PI).abs() < 1e-12);
        let g = sphere_grid(Dim::Three, 32).unwrap();
        assert!((g.weights.iter().sum::<f64>() - 4.0 * PI).abs() < 1e-12);
        for p in &g.points {
            let n: f64 = p.iter().map(|v| v * v).sum::<f64>().sqrt();
            assert!((n - 1.0).abs() < 1e-12);
        }
        assert!(sphere_grid(Dim::Two, 3).is_err());
    }

    #[test]
    fn harmonic_self_product() {
        let g = sphere_grid(Dim::Three, 32).unwrap();
        let idx = HarmonicIndex::new(Dim::Three, 2, 1).unwrap();
        let v = g.integrate(|p| sph_harmonic(idx, p).unwrap().powi(2));
        assert!((v - 1.0).abs() < 1e-13);
    }

    #[test]
    fn orthonormality_up_to_degree_eight() {
        for d in [Dim::Two, Dim::Three] {
            let g = sphere_grid(d, 32).unwrap();
            let idx = harmonic_indices(d, 8);
            let values: Vec<Vec<f64>> = g.points.iter().map(|p| harmonics_upto(d, 8, p)).collect();
            for a in 0..idx.len() {
                for b in 0..=a {
                    let s: f64 = values.iter().zip(&g.weights).map(|(v, w)| w * v[a] * v[b]).sum();
                    let want = if a == b { 1.0 } else { 0.0 };
                    assert!((s - want).abs() < 1e-10, "{d}: {:?} {:?} -> {s}", idx[a], idx[b]);
                }
            }
        }
    }

    #[test]
    fn exactness_boundary_on_circle() {
        let g = sphere_grid(Dim::Two, 16).unwrap();
        let below = g.integrate(|p| (15.0 * p[1].atan2(p[0])).cos());
        let at = g.integrate(|p| (16.0 * p[1].atan2(p[0])).cos());
        assert!(below.abs() < 1e-13);
        assert!((at - 2.0 * PI).abs() < 1e-12);
        assert_eq!(g.exact_degree(), 15);
    }
}
