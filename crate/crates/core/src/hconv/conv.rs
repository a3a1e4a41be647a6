use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dim::Dim;
use crate::error::{Error, Result};
use crate::herglotz::{analyze_field, synth, synth_on_sphere, HerglotzField, SphereFunction};
use crate::quad::{radial_nodes_for, radial_rule, sphere_grid, SphereGrid};

/// Radii of the spheres on which the convolution is sampled for analysis.
pub const ANALYSIS_RADII: [f64; 3] = [1.5, 2.5, 3.5];

/// Relative size of the extrapolation correction accepted as converged.
pub const LADDER_TOLERANCE: f64 = 0.05;

// Ball rule for y |-> u(x - y) v(y) with |x| <= x_max: on spheres the product
// has angular degree about |x| + deg(u) + deg(v).
struct BallRule {
    radial: Vec<(f64, f64)>,
    shell: SphereGrid,
    v_on_shells: Vec<Vec<Complex64>>,
}

fn degree(f: &HerglotzField) -> usize {
    f.source.max_degree().unwrap_or(0)
}

impl BallRule {
    fn new(u: &HerglotzField, v: &HerglotzField, r: f64, x_max: f64) -> Result<Self> {
        let d = u.d;
        let res = 2 * (x_max.ceil() as usize + degree(u) + degree(v)) + 24;
        let shell = sphere_grid(d, res)?;
        let radial = radial_rule(r, radial_nodes_for(r), d.get())?;
        let v_on_shells = radial.par_iter().map(|&(t, _)| synth_on_sphere(&v.source, t, &shell)).collect::<Result<Vec<_>>>()?;
        Ok(BallRule { radial, shell, v_on_shells })
    }

    // c_d R^{-1} int_{|y| < R} u(x - y) v(y) dy
    fn apply(&self, u: &HerglotzField, x: &[f64], r: f64) -> Result<Complex64> {
        let d = x.len();
        let mut z = vec![0.0; d];
        let mut total = Complex64::default();
        for ((t, wt), vs) in self.radial.iter().zip(&self.v_on_shells) {
            let mut s = Complex64::default();
            for ((p, w), vv) in self.shell.points.iter().zip(&self.shell.weights).zip(vs) {
                for i in 0..d {
                    z[i] = x[i] - t * p[i];
                }
                s += synth(&u.source, &z)? * vv * *w;
            }
            total += s * *wt;
        }
        Ok(total * (u.d.synthesis_constant() / r))
    }
}

fn check_pair(u: &HerglotzField, v: &HerglotzField) -> Result<Dim> {
    if u.d != v.d {
        return Err(Error::DimensionMismatch { expected: u.d.get(), found: v.d.get() });
    }
    Ok(u.d)
}

/// `w_R(x) = c_d R^{-1} int_{|y| < R} u(x - y) v(y) dy` at one point.
pub fn hconv_at(u: &HerglotzField, v: &HerglotzField, x: &[f64], r: f64) -> Result<Complex64> {
    check_pair(u, v)?;
    if x.len() != u.d.get() {
        return Err(Error::DimensionMismatch { expected: u.d.get(), found: x.len() });
    }
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidArgument(format!("ball radius must be positive, got {r}")));
    }
    let x_max = x.iter().map(|c| c * c).sum::<f64>().sqrt();
    BallRule::new(u, v, r, x_max)?.apply(u, x, r)
}

/// Sphere density of `w_R`, recovered from samples on [`ANALYSIS_RADII`] up to
/// degree `deg(u) + deg(v)`.
pub fn hconv_density(u: &HerglotzField, v: &HerglotzField, r: f64) -> Result<SphereFunction> {
    let d = check_pair(u, v)?;
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidArgument(format!("ball radius must be positive, got {r}")));
    }
    if u.source.is_zero() || v.source.is_zero() {
        return Ok(SphereFunction::zero(d));
    }
    let nmax = degree(u) + degree(v);
    let x_max = ANALYSIS_RADII.iter().copied().fold(0.0, f64::max);
    let rule = BallRule::new(u, v, r, x_max)?;
    let grid = sphere_grid(d, 2 * nmax + 8)?;
    let failure = std::sync::Mutex::new(None);
    let field = |x: &[f64]| match rule.apply(u, x, r) {
        Ok(z) => z,
        Err(e) => {
            failure.lock().expect("unpoisoned").get_or_insert(e);
            Complex64::default()
        }
    };
    let density = analyze_field(&field, d, nmax, &ANALYSIS_RADII, &grid)?;
    if let Some(e) = failure.into_inner().expect("unpoisoned") {
        return Err(e);
    }
    Ok(density)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LadderRung {
    pub r: f64,
    pub density: SphereFunction,
}

/// `u *_h v` from a ladder of ball radii.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HConvolution {
    /// Field of the density extrapolated linearly in `1/R`.
    pub field: HerglotzField,
    pub ladder: Vec<LadderRung>,
    /// `||extrapolated - last rung||`.
    pub residual: f64,
    /// Residual within [`LADDER_TOLERANCE`] of the extrapolated norm.
    pub converged: bool,
}

/// Convolution densities at each ladder radius, combined by a least-squares
/// fit `c(R) = c_inf + b / R` per coefficient.
pub fn hconvolve(u: &HerglotzField, v: &HerglotzField, r_ladder: &[f64]) -> Result<HConvolution> {
    let d = check_pair(u, v)?;
    if r_ladder.is_empty() {
        return Err(Error::InvalidArgument("radius ladder is empty".into()));
    }
    let ladder: Vec<LadderRung> =
        r_ladder.iter().map(|&r| Ok(LadderRung { r, density: hconv_density(u, v, r)? })).collect::<Result<_>>()?;
    let last = &ladder[ladder.len() - 1].density;
    let extrapolated = if ladder.len() == 1 {
        last.clone()
    } else {
        extrapolate(&ladder, d)?
    };
    let residual = extrapolated.minus(last)?.norm();
    let converged = residual <= LADDER_TOLERANCE * extrapolated.norm().max(f64::MIN_POSITIVE);
    Ok(HConvolution { field: HerglotzField::new(extrapolated), ladder, residual, converged })
}

fn extrapolate(ladder: &[LadderRung], d: Dim) -> Result<SphereFunction> {
    let h: Vec<f64> = ladder.iter().map(|l| 1.0 / l.r).collect();
    let n = h.len() as f64;
    let mh = h.iter().sum::<f64>() / n;
    let shh: f64 = h.iter().map(|x| (x - mh) * (x - mh)).sum();
    if shh == 0.0 {
        return Err(Error::InvalidArgument("ladder radii must be distinct".into()));
    }
    let mut keys: Vec<_> = ladder.iter().flat_map(|l| l.density.coeffs().keys().copied()).collect();
    keys.sort();
    keys.dedup();
    let mut out = SphereFunction::zero(d);
    for k in keys {
        let c: Vec<Complex64> = ladder.iter().map(|l| l.density.coeff(k)).collect();
        let mc = c.iter().sum::<Complex64>() / n;
        let slope = h.iter().zip(&c).map(|(x, y)| (y - mc) * (x - mh)).sum::<Complex64>() / shh;
        out.set(k, mc - slope * mh)?;
    }
    Ok(out)
}

/// `||I*(u *_h v) - phi psi||` at each ladder radius.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorizationReport {
    pub residuals: Vec<(f64, f64)>,
    /// `residual(R_{k+1}) / residual(R_k)`.
    pub ratios: Vec<f64>,
}

pub fn verify_factorization(u: &HerglotzField, v: &HerglotzField, r_ladder: &[f64]) -> Result<FactorizationReport> {
    let d = check_pair(u, v)?;
    let nmax = degree(u) + degree(v);
    let grid = sphere_grid(d, 2 * nmax + 8)?;
    let target = u.source.product(&v.source, &grid, nmax)?;
    let residuals: Vec<(f64, f64)> =
        r_ladder.iter().map(|&r| Ok((r, hconv_density(u, v, r)?.minus(&target)?.norm()))).collect::<Result<_>>()?;
    let ratios = residuals.windows(2).map(|w| if w[0].1 > 0.0 { w[1].1 / w[0].1 } else { 0.0 }).collect();
    Ok(FactorizationReport { residuals, ratios })
}
