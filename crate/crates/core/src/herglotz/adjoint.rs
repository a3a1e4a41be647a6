use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::field::{i_pow, radial_factors, synth_on_sphere, Constants};
use super::SphereFunction;
use crate::dim::Dim;
use crate::error::{Error, Result};
use crate::quad::{ball_average_shells, radial_nodes_for, radial_rule, sphere_grid, SphereGrid};
use crate::specfun::{bessel_j, basis_len, harmonic_indices, harmonics_upto};

/// Smallest ball radius accepted by [`istar`].
pub const ISTAR_MIN_RADIUS: f64 = 50.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IstarEstimate {
    /// First-order Richardson value `2 I_{2R} - I_R`.
    pub value: Complex64,
    pub at_r: Complex64,
    pub at_2r: Complex64,
}

/// Angular resolution that resolves `exp(-i x . xi)` on spheres up to radius `r`.
pub fn adjoint_resolution(r: f64) -> usize {
    (1.2 * r).ceil() as usize + 32
}

/// `c_d R^{-1} int_{|x|<R} u(x) exp(-i x . xi) dx` on a tensor ball grid.
pub fn istar_at<F>(u: &F, xi: &[f64], r: f64, grid: &SphereGrid, radial_nodes: usize) -> Result<Complex64>
where
    F: Fn(&[f64]) -> Complex64 + Sync,
{
    let d = grid.d.get();
    if xi.len() != d {
        return Err(Error::DimensionMismatch { expected: d, found: xi.len() });
    }
    let radial = radial_rule(r, radial_nodes, d)?;
    let parts: Vec<Complex64> = radial
        .par_iter()
        .map(|&(t, wt)| {
            let mut x = vec![0.0; d];
            let mut s = Complex64::default();
            for (p, w) in grid.points.iter().zip(&grid.weights) {
                let mut phase = 0.0;
                for i in 0..d {
                    x[i] = t * p[i];
                    phase += x[i] * xi[i];
                }
                s += u(&x) * Complex64::from_polar(*w, -phase);
            }
            s * wt
        })
        .collect();
    let total: Complex64 = parts.iter().sum();
    Ok(total * (grid.d.synthesis_constant() / r))
}

/// Adjoint of the synthesis operator at `xi`, from ball integrals at `R` and
/// `2R` combined by Richardson extrapolation in `1/R`.
pub fn istar<F>(u: &F, d: Dim, xi: &[f64], r: f64) -> Result<IstarEstimate>
where
    F: Fn(&[f64]) -> Complex64 + Sync,
{
    if !(r >= ISTAR_MIN_RADIUS) {
        return Err(Error::InvalidArgument(format!("istar needs R >= {ISTAR_MIN_RADIUS}, got {r}")));
    }
    let g1 = sphere_grid(d, adjoint_resolution(r))?;
    let g2 = sphere_grid(d, adjoint_resolution(2.0 * r))?;
    let at_r = istar_at(u, xi, r, &g1, radial_nodes_for(r))?;
    let at_2r = istar_at(u, xi, 2.0 * r, &g2, radial_nodes_for(2.0 * r))?;
    Ok(IstarEstimate { value: 2.0 * at_2r - at_r, at_r, at_2r })
}

/// `(pi / R) int_0^R J_{n+s}(r)^2 r dr`: the factor by which the ball integral
/// at radius `R` scales a degree-`n` coefficient, tending to 1.
pub fn finite_adjoint_multiplier(d: Dim, n: usize, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::InvalidArgument(format!("radius must be positive, got {r}")));
    }
    let nu = n as f64 + d.order_shift();
    let j = bessel_j(nu, r)?;
    let jp = bessel_j(nu + 1.0, r)?;
    let jm = 2.0 * nu / r * j - jp;
    // Lommel: int_0^R J^2 r dr = R^2/2 (J_nu^2 - J_{nu-1} J_{nu+1})
    Ok(std::f64::consts::PI * r / 2.0 * (j * j - jm * jp))
}

/// `R^{-1} int_{|x|<R} |I phi|^2 dx`, which tends to `||phi||^2`.
pub fn b_star_average(phi: &SphereFunction, r: f64, grid: &SphereGrid) -> Result<f64> {
    if grid.d != phi.d() {
        return Err(Error::DimensionMismatch { expected: phi.d().get(), found: grid.d.get() });
    }
    let shell = |t: f64| -> f64 {
        let vals = synth_on_sphere(phi, t, grid).expect("validated radius");
        vals.iter().zip(&grid.weights).map(|(v, w)| w * v.norm_sqr()).sum()
    };
    ball_average_shells(shell, r, phi.d().get(), radial_nodes_for(r))
}

/// Recovers the sphere density of a Herglotz field from its values on spheres
/// of the given radii by harmonic analysis and least squares over the radii.
pub fn analyze_field<F>(u: &F, d: Dim, nmax: usize, radii: &[f64], grid: &SphereGrid) -> Result<SphereFunction>
where
    F: Fn(&[f64]) -> Complex64 + Sync,
{
    if grid.d != d {
        return Err(Error::DimensionMismatch { expected: d.get(), found: grid.d.get() });
    }
    if radii.is_empty() || radii.iter().any(|r| !(*r > 0.0)) {
        return Err(Error::InvalidArgument("analysis radii must be positive and non-empty".into()));
    }
    let len = basis_len(d, nmax as isize);
    let harmonics: Vec<Vec<f64>> = grid.points.iter().map(|p| harmonics_upto(d, nmax, p)).collect();
    let idx = harmonic_indices(d, nmax);
    let mut num = vec![Complex64::default(); len];
    let mut den = vec![0.0; len];
    for &rho in radii {
        let samples: Vec<Complex64> = grid
            .points
            .par_iter()
            .map(|p| {
                let x: Vec<f64> = p.iter().map(|c| rho * c).collect();
                u(&x)
            })
            .collect();
        let radial = radial_factors(d, nmax, rho)?;
        let mut proj = vec![Complex64::default(); len];
        for ((y, w), v) in harmonics.iter().zip(&grid.weights).zip(&samples) {
            for (acc, yk) in proj.iter_mut().zip(y) {
                *acc += v * (w * yk);
            }
        }
        for (k, ix) in idx.iter().enumerate() {
            let b = i_pow(ix.n) * radial[ix.n];
            num[k] += b.conj() * proj[k];
            den[k] += b.norm_sqr();
        }
    }
    let coeffs: Vec<Complex64> = num.iter().zip(&den).map(|(a, b)| if *b > 0.0 { a / b } else { *a }).collect();
    SphereFunction::from_dense(d, nmax, &coeffs)
}

/// Leading far-field term
/// `c_d (2 pi / r)^{(d-1)/2} (eps_minus e^{i r} phi(x/r) + eps_plus e^{-i r} phi(-x/r))`.
pub fn far_field(phi: &SphereFunction, x: &[f64]) -> Result<Complex64> {
    let d = phi.d();
    if x.len() != d.get() {
        return Err(Error::DimensionMismatch { expected: d.get(), found: x.len() });
    }
    let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if r == 0.0 {
        return Err(Error::Domain("far field undefined at the origin".into()));
    }
    let xi: Vec<f64> = x.iter().map(|v| v / r).collect();
    let minus: Vec<f64> = xi.iter().map(|v| -v).collect();
    Ok(far_field_unit(phi, &xi, &minus, r))
}

fn far_field_unit(phi: &SphereFunction, xi: &[f64], minus: &[f64], r: f64) -> Complex64 {
    let k = Constants::new(phi.d());
    let amp = k.c_d * (2.0 * std::f64::consts::PI / r).powf((phi.d().get() as f64 - 1.0) / 2.0);
    let out = k.eps_minus * Complex64::from_polar(1.0, r) * phi.eval(xi);
    let back = k.eps_plus * Complex64::from_polar(1.0, -r) * phi.eval(minus);
    (out + back) * amp
}

fn far_field_shell(phi: &SphereFunction, t: f64, grid: &SphereGrid) -> Result<f64> {
    let u = synth_on_sphere(phi, t, grid)?;
    let mut s = 0.0;
    for ((p, w), v) in grid.points.iter().zip(&grid.weights).zip(&u) {
        let minus: Vec<f64> = p.iter().map(|c| -c).collect();
        s += w * (v - far_field_unit(phi, p, &minus, t)).norm_sqr();
    }
    Ok(s)
}

/// Averaged far-field remainder
/// `sqrt(R^{-1} int_{R<|x|<2R} |u - u_far|^2 dx)` with the radial integral on
/// `ceil(4R)` Gauss–Legendre nodes and the angular one on `grid`.
pub fn far_field_residual(phi: &SphereFunction, r: f64, grid: &SphereGrid) -> Result<f64> {
    if !(r >= 20.0) {
        return Err(Error::InvalidArgument(format!("far-field residual needs R >= 20, got {r}")));
    }
    if grid.d != phi.d() {
        return Err(Error::DimensionMismatch { expected: phi.d().get(), found: grid.d.get() });
    }
    let d = phi.d().get() as i32;
    let rule = crate::specfun::gauss_legendre(radial_nodes_for(r))?;
    let parts: Vec<Result<f64>> = rule
        .mapped(r, 2.0 * r)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&(t, w)| Ok(w * t.powi(d - 1) * far_field_shell(phi, t, grid)?))
        .collect();
    let mut total = 0.0;
    for p in parts {
        total += p?;
    }
    Ok((total / r).sqrt())
}

/// Remainder on the single sphere of radius `R`, scaled by `R^{(d-1)/2}`.
/// Oscillates with `R`; kept for comparison with [`far_field_residual`].
pub fn far_field_sphere_residual(phi: &SphereFunction, r: f64, grid: &SphereGrid) -> Result<f64> {
    let d = phi.d().get() as i32;
    Ok((far_field_shell(phi, r, grid)? * r.powi(d - 1)).sqrt())
}
