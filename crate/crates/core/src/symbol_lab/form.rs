use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::window::DegenerateSymbol;
use crate::dim::Dim;
use crate::error::{Error, Result};
use crate::herglotz::{synth_on_sphere, SphereFunction};
use crate::quad::{integrate_decaying, panel_rule, panels, sphere_grid, SphereGrid, PANEL_NODES};
use crate::radial_toeplitz::{DecayTag, RadialSymbol};

pub type RadialProfile = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type GeneralProfile = Arc<dyn Fn(&[f64]) -> Complex64 + Send + Sync>;

/// A symbol evaluated pointwise in space.
#[derive(Clone)]
pub enum SpatialSymbol {
    /// `a(|x|)`, vanishing beyond `support` when given.
    Radial { f: RadialProfile, support: Option<f64> },
    General(GeneralProfile),
}

impl std::fmt::Debug for SpatialSymbol {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SpatialSymbol::Radial { support, .. } => write!(f, "SpatialSymbol::Radial(support={support:?})"),
            SpatialSymbol::General(_) => write!(f, "SpatialSymbol::General"),
        }
    }
}

impl SpatialSymbol {
    pub fn zero() -> Self {
        SpatialSymbol::Radial { f: Arc::new(|_| 0.0), support: Some(0.0) }
    }

    pub fn radial<F>(f: F, support: Option<f64>) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        SpatialSymbol::Radial { f: Arc::new(f), support }
    }

    pub fn general<F>(f: F) -> Self
    where
        F: Fn(&[f64]) -> Complex64 + Send + Sync + 'static,
    {
        SpatialSymbol::General(Arc::new(f))
    }

    pub fn from_radial(a: &RadialSymbol) -> Self {
        let a2 = a.clone();
        SpatialSymbol::Radial { f: Arc::new(move |r| a2.eval(r)), support: a.support_radius() }
    }

    pub fn from_degenerate(a: &DegenerateSymbol) -> Self {
        if a.is_zero() {
            return SpatialSymbol::zero();
        }
        let a2 = a.clone();
        SpatialSymbol::Radial { f: Arc::new(move |r| a2.eval(r)), support: None }
    }

    pub fn eval(&self, x: &[f64]) -> Complex64 {
        match self {
            SpatialSymbol::Radial { f, support } => {
                let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                match support {
                    Some(s) if r > *s => Complex64::default(),
                    _ => Complex64::new(f(r), 0.0),
                }
            }
            SpatialSymbol::General(f) => f(x),
        }
    }
}

/// Ball-truncated value of `F_a(u, v) = int a u conj(v) dx`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FormEstimate {
    pub value: Complex64,
    /// `int_{R < |x| < 2R} |a u v|`, a proxy for the neglected tail.
    pub tail_bound: f64,
    /// `int_{|x| < R} |a u v|`, the scale against which the tail is judged.
    pub abs_integral: f64,
    /// False when the tail bound exceeds `1e-6` of the scale.
    pub tail_ok: bool,
}

/// Tail bound accepted relative to the absolute integral.
pub const TAIL_TOLERANCE: f64 = 1e-6;

/// Quadrature controls: radial Gauss–Legendre nodes per unit length and the sphere grid.
#[derive(Debug, Clone)]
pub struct FormGrid {
    pub nodes_per_unit: f64,
    pub sphere: SphereGrid,
}

impl FormGrid {
    /// Sphere grid exact for products of harmonics up to `degree`, with a floor of 16 points.
    pub fn for_degree(d: Dim, degree: usize, nodes_per_unit: f64) -> Result<Self> {
        if !(nodes_per_unit > 0.0) {
            return Err(Error::InvalidArgument(format!("nodes_per_unit must be positive, got {nodes_per_unit}")));
        }
        let sphere = sphere_grid(d, (2 * degree + 2).max(16))?;
        Ok(FormGrid { nodes_per_unit, sphere })
    }
}

fn radial_panels(lo: f64, hi: f64, nodes_per_unit: f64, d: usize) -> Vec<(f64, f64)> {
    if hi <= lo {
        return Vec::new();
    }
    let len = PANEL_NODES as f64 / nodes_per_unit;
    let count = ((hi - lo) / len).ceil().max(1.0) as usize;
    let h = (hi - lo) / count as f64;
    let rule = panel_rule();
    (0..count)
        .flat_map(|i| {
            let a = lo + i as f64 * h;
            rule.mapped(a, a + h).map(|(t, w)| (t, w * t.powi(d as i32 - 1))).collect::<Vec<_>>()
        })
        .collect()
}

/// Matrix of ball-truncated forms `F_a(I phi_i, I phi_j)` over a family of densities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormMatrix {
    pub size: usize,
    /// Row-major, entry `(i, j)` pairs `u = I phi_i` with `conj(v)`, `v = I phi_j`.
    pub entries: Vec<FormEstimate>,
}

impl FormMatrix {
    pub fn get(&self, i: usize, j: usize) -> &FormEstimate {
        &self.entries[i * self.size + j]
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|e| e.value.norm()).fold(0.0, f64::max)
    }
}

// Sums of w a u_i conj(u_j) and of w |a u_i u_j| at one radius.
fn shell_sums(
    a: &SpatialSymbol,
    fields: &[SphereFunction],
    t: f64,
    wt: f64,
    grid: &SphereGrid,
) -> Result<(Vec<Complex64>, Vec<f64>)> {
    let n = fields.len();
    let values: Vec<Vec<Complex64>> = fields.iter().map(|phi| synth_on_sphere(phi, t, grid)).collect::<Result<_>>()?;
    let mut signed = vec![Complex64::default(); n * n];
    let mut abs = vec![0.0; n * n];
    let d = grid.d.get();
    let mut x = vec![0.0; d];
    for (k, (p, w)) in grid.points.iter().zip(&grid.weights).enumerate() {
        for i in 0..d {
            x[i] = t * p[i];
        }
        let av = a.eval(&x) * (w * wt);
        if av == Complex64::default() {
            continue;
        }
        for i in 0..n {
            let ui = values[i][k];
            for j in 0..n {
                let z = av * ui * values[j][k].conj();
                signed[i * n + j] += z;
                abs[i * n + j] += z.norm();
            }
        }
    }
    Ok((signed, abs))
}

fn accumulate(
    a: &SpatialSymbol,
    fields: &[SphereFunction],
    nodes: &[(f64, f64)],
    grid: &SphereGrid,
) -> Result<(Vec<Complex64>, Vec<f64>)> {
    let n = fields.len();
    let parts: Vec<Result<(Vec<Complex64>, Vec<f64>)>> =
        nodes.par_iter().map(|&(t, wt)| shell_sums(a, fields, t, wt, grid)).collect();
    let mut signed = vec![Complex64::default(); n * n];
    let mut abs = vec![0.0; n * n];
    for part in parts {
        let (s, b) = part?;
        for k in 0..n * n {
            signed[k] += s[k];
            abs[k] += b[k];
        }
    }
    Ok((signed, abs))
}

/// All forms `F_a(I phi_i, I phi_j)` over the ball of radius `r`, sharing field evaluations.
pub fn form_matrix_on(a: &SpatialSymbol, fields: &[SphereFunction], r: f64, grid: &FormGrid) -> Result<FormMatrix> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidArgument(format!("truncation radius must be positive, got {r}")));
    }
    let d = grid.sphere.d;
    for phi in fields {
        if phi.d() != d {
            return Err(Error::DimensionMismatch { expected: d.get(), found: phi.d().get() });
        }
    }
    let support = match a {
        SpatialSymbol::Radial { support, .. } => *support,
        SpatialSymbol::General(_) => None,
    };
    let top = support.map_or(r, |s| s.min(r));
    let inner = radial_panels(0.0, top, grid.nodes_per_unit, d.get());
    let outer = match support {
        Some(s) if s <= r => Vec::new(),
        _ => radial_panels(r, support.map_or(2.0 * r, |s| s.min(2.0 * r)), grid.nodes_per_unit, d.get()),
    };
    let (signed, abs) = accumulate(a, fields, &inner, &grid.sphere)?;
    let (_, tail) = accumulate(a, fields, &outer, &grid.sphere)?;
    let entries = (0..fields.len() * fields.len())
        .map(|k| FormEstimate {
            value: signed[k],
            tail_bound: tail[k],
            abs_integral: abs[k],
            tail_ok: tail[k] <= TAIL_TOLERANCE * abs[k],
        })
        .collect();
    Ok(FormMatrix { size: fields.len(), entries })
}

/// [`form_matrix_on`] with a sphere grid sized for the field degrees and
/// `nodes_per_unit` radial nodes per unit length. Non-radial symbols may need
/// a finer sphere grid passed explicitly.
pub fn form_matrix(a: &SpatialSymbol, fields: &[SphereFunction], r: f64, nodes_per_unit: f64) -> Result<FormMatrix> {
    let Some(first) = fields.first() else {
        return Ok(FormMatrix { size: 0, entries: Vec::new() });
    };
    let degree = fields.iter().filter_map(|p| p.max_degree()).max().unwrap_or(0);
    form_matrix_on(a, fields, r, &FormGrid::for_degree(first.d(), 2 * degree, nodes_per_unit)?)
}

/// `F_a(u, v)` for `u = I phi`, `v = I psi` over the ball of radius `r`.
pub fn form_quadrature(
    a: &SpatialSymbol,
    u: &SphereFunction,
    v: &SphereFunction,
    r: f64,
    nodes_per_unit: f64,
) -> Result<FormEstimate> {
    let m = form_matrix(a, &[u.clone(), v.clone()], r, nodes_per_unit)?;
    Ok(*m.get(0, 1))
}

/// `||a||_{L1(R^d)} = |S^{d-1}| int_0^inf |a(r)| r^{d-1} dr`.
pub fn l1_norm(a: &RadialSymbol, d: Dim) -> Result<f64> {
    let dm1 = d.get() as i32 - 1;
    let g = |r: f64| a.eval(r).abs() * r.powi(dm1);
    let radial = match (a.support_radius(), a.decay_tag()) {
        (Some(s), _) => panels(&g, 0.0, s, 0.25),
        (None, DecayTag::L1) => {
            let est = integrate_decaying(g, 0.5, 1e4)?;
            if !est.converged {
                return Err(Error::NonConvergence("L1 norm integral did not settle".into()));
            }
            est.value
        }
        (None, tag) => {
            return Err(Error::Divergent(format!("symbol with decay {tag:?} is not known to be integrable")));
        }
    };
    Ok(d.sphere_area() * radial)
}
