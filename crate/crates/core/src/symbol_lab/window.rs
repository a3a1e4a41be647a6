use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dim::Dim;
use crate::error::{Error, Result};
use crate::radial_toeplitz::RadialSymbol;
use crate::quad::panel_rule;
use crate::specfun::{bessel_j, gamma_fn};
use crate::sphere_op::{fourier_radial, SymbolTransform, TransformKind};

/// Radius inside which every cut-off window equals one.
pub const INNER_RADIUS: f64 = 2.0;

/// Smooth radial window `omega` with `omega = 1` on `[0, 2]` and `omega = 0`
/// beyond `r0`, joined by the `exp(-1/t)` bump ramp.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CutoffWindow {
    /// `None` for the window equal to one everywhere.
    pub r0: Option<f64>,
}

fn bump(t: f64) -> f64 {
    if t > 0.0 {
        (-1.0 / t).exp()
    } else {
        0.0
    }
}

impl CutoffWindow {
    pub fn new(r0: f64) -> Result<Self> {
        if !(r0 > INNER_RADIUS) || !r0.is_finite() {
            return Err(Error::InvalidArgument(format!("window radius must exceed 2, got {r0}")));
        }
        Ok(CutoffWindow { r0: Some(r0) })
    }

    pub fn everywhere() -> Self {
        CutoffWindow { r0: None }
    }

    pub fn omega(&self, rho: f64) -> f64 {
        let Some(r0) = self.r0 else { return 1.0 };
        let rho = rho.abs();
        if rho <= INNER_RADIUS {
            return 1.0;
        }
        if rho >= r0 {
            return 0.0;
        }
        let t = (rho - INNER_RADIUS) / (r0 - INNER_RADIUS);
        let up = bump(t);
        1.0 - up / (up + bump(1.0 - t))
    }
}

/// Spatial profile of `a_deg`, the inverse transform of `a_hat (1 - omega)`,
/// stored as a quadrature rule in the frequency variable.
#[derive(Clone)]
pub struct DegenerateSymbol {
    pub d: Dim,
    /// Largest radius at which the rule resolves the oscillation of `J(r rho)`.
    pub r_limit: f64,
    /// Frequency nodes and weights including `a_hat (1 - omega) rho^{d/2}`.
    nodes: Arc<Vec<(f64, f64)>>,
}

impl std::fmt::Debug for DegenerateSymbol {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "DegenerateSymbol(d={}, nodes={}, r_limit={})", self.d, self.nodes.len(), self.r_limit)
    }
}

impl DegenerateSymbol {
    pub fn is_zero(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `a_deg(r) = r^{-s} int_2^inf a_hat(rho)(1 - omega(rho)) J_s(r rho) rho^{d/2} d rho`.
    pub fn eval(&self, r: f64) -> f64 {
        let s = self.d.order_shift();
        if r == 0.0 {
            let norm = 2f64.powf(s) * gamma_fn(s + 1.0).unwrap_or(f64::NAN);
            return self.nodes.iter().map(|(rho, w)| w * rho.powf(s)).sum::<f64>() / norm;
        }
        let sum: f64 = self.nodes.iter().map(|(rho, w)| w * bessel_j(s, r * rho).unwrap_or(f64::NAN)).sum();
        sum / r.powf(s)
    }

    /// Values at many radii, in parallel.
    pub fn eval_many(&self, radii: &[f64]) -> Vec<f64> {
        radii.par_iter().map(|&r| self.eval(r)).collect()
    }
}

// Transforms below this fraction of their maximum count as negligible.
const NEGLIGIBLE: f64 = 1e-17;
const SCAN_LIMIT: f64 = 200.0;

/// Degenerate part `a - a_omega` of a radial symbol for spatial radii up to `r_limit`.
pub fn degenerate_part_with(a: &RadialSymbol, window: &CutoffWindow, d: Dim, r_limit: f64) -> Result<DegenerateSymbol> {
    if !(r_limit > 0.0) {
        return Err(Error::InvalidArgument(format!("r_limit must be positive, got {r_limit}")));
    }
    let empty = || DegenerateSymbol { d, r_limit, nodes: Arc::new(Vec::new()) };
    if window.r0.is_none() {
        return Ok(empty());
    }
    // scan for the frequency beyond which a_hat is negligible
    let ahat = |rho: f64| fourier_radial(a, d, rho);
    let mut peak = ahat(0.5)?.abs();
    let mut rho = INNER_RADIUS;
    let mut quiet = 0;
    let mut top = None;
    while rho <= SCAN_LIMIT {
        let v = ahat(rho)?.abs();
        peak = peak.max(v);
        if v <= NEGLIGIBLE * peak {
            quiet += 1;
            if quiet >= 8 {
                top = Some(rho);
                break;
            }
        } else {
            quiet = 0;
        }
        rho += 0.5;
    }
    let Some(top) = top else {
        return Err(Error::Divergent(format!(
            "symbol transform does not become negligible before rho = {SCAN_LIMIT}; the degenerate part needs fast decay"
        )));
    };
    if peak == 0.0 {
        return Ok(empty());
    }
    let panel = (std::f64::consts::PI / r_limit).min(0.25);
    let raw = panel_nodes(INNER_RADIUS, top, panel);
    let half = d.get() as f64 / 2.0;
    let weighted: Vec<Result<(f64, f64)>> = raw
        .par_iter()
        .map(|&(rho, w)| Ok((rho, w * ahat(rho)? * (1.0 - window.omega(rho)) * rho.powf(half))))
        .collect();
    let nodes: Vec<(f64, f64)> = weighted.into_iter().collect::<Result<Vec<_>>>()?.into_iter().filter(|(_, w)| *w != 0.0).collect();
    Ok(DegenerateSymbol { d, r_limit, nodes: Arc::new(nodes) })
}

fn panel_nodes(a: f64, b: f64, max_len: f64) -> Vec<(f64, f64)> {
    let count = ((b - a) / max_len).ceil().max(1.0) as usize;
    let h = (b - a) / count as f64;
    (0..count).flat_map(|i| panel_rule().mapped(a + i as f64 * h, a + (i + 1) as f64 * h).collect::<Vec<_>>()).collect()
}

/// [`degenerate_part_with`] resolved for radii up to 128.
pub fn degenerate_part(a: &RadialSymbol, window: &CutoffWindow, d: Dim) -> Result<DegenerateSymbol> {
    degenerate_part_with(a, window, d, 128.0)
}

/// Transform of `a_omega = a - a_deg`, namely `a_hat omega`.
pub fn cutoff_transform(t: &SymbolTransform, window: &CutoffWindow) -> Result<SymbolTransform> {
    let TransformKind::Radial(p) = &t.kind else {
        return Err(Error::InvalidArgument("cut-off transforms need a radial symbol".into()));
    };
    let p = p.clone();
    let w = *window;
    let mut out = SymbolTransform::radial(t.d, move |rho| p(rho) * w.omega(rho), t.singular_exponent);
    out.provenance = t.provenance;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_shape() {
        let w = CutoffWindow::new(3.0).unwrap();
        assert_eq!(w.omega(0.0), 1.0);
        assert_eq!(w.omega(2.0), 1.0);
        assert_eq!(w.omega(3.0), 0.0);
        assert!((w.omega(2.5) - 0.5).abs() < 1e-15);
        let mut prev = 1.0;
        for k in 0..=100 {
            let v = w.omega(2.0 + k as f64 / 100.0);
            assert!((0.0..=1.0).contains(&v) && v <= prev);
            prev = v;
        }
        assert_eq!(w.omega(-2.5), w.omega(2.5));
        assert!(CutoffWindow::new(2.0).is_err());
        assert_eq!(CutoffWindow::everywhere().omega(1e9), 1.0);
    }

    #[test]
    fn everywhere_window_has_no_degenerate_part() {
        let a = RadialSymbol::gaussian(1.0).unwrap();
        let whole = degenerate_part(&a, &CutoffWindow::everywhere(), Dim::Two).unwrap();
        assert!(whole.is_zero());
        assert_eq!(whole.eval(3.0), 0.0);
    }

    #[test]
    fn gaussian_degenerate_part() {
        let a = RadialSymbol::gaussian(1.0).unwrap();
        let w = CutoffWindow::new(3.0).unwrap();
        let deg = degenerate_part(&a, &w, Dim::Two).unwrap();
        assert!(!deg.is_zero());
        // a_deg(0) = int_2^inf a_hat (1 - omega) rho d rho < int_2^inf e^{-rho^2/2} rho = e^{-2}
        let v0 = deg.eval(0.0);
        assert!(v0 > 0.0 && v0 < (-2f64).exp());
        assert!((deg.eval(1e-9) - v0).abs() < 1e-12);
        // mass of the transform beyond 2 is bounded by the Gaussian there
        for rho in [2.0, 2.5, 3.0, 5.0] {
            assert!(fourier_radial(&a, Dim::Two, rho).unwrap() * (1.0 - w.omega(rho)) <= (-2f64).exp());
        }
        // beyond rho = 3 the window vanishes and the Gaussian tail integrates to e^{-9/2}
        let ramp = crate::quad::panels(&|rho: f64| (-0.5 * rho * rho).exp() * (1.0 - w.omega(rho)) * rho, 2.0, 3.0, 0.01);
        assert!((v0 - ramp - (-4.5f64).exp()).abs() < 1e-13, "{v0} {ramp}");
        assert!(deg.eval(60.0).abs() < v0);
    }

    #[test]
    fn slow_transforms_rejected() {
        let a = RadialSymbol::indicator(1.0).unwrap();
        let r = degenerate_part(&a, &CutoffWindow::new(3.0).unwrap(), Dim::Two);
        assert!(matches!(r, Err(Error::Divergent(_))));
    }

    #[test]
    fn cutoff_keeps_the_sphere_spectrum() {
        use crate::quad::sphere_grid;
        use crate::sphere_op::{build_nodal, eigen_hermitian};
        for (d, res) in [(Dim::Two, 64), (Dim::Three, 12)] {
            let a = RadialSymbol::gaussian(1.0).unwrap();
            let t = SymbolTransform::from_symbol(&a, d).unwrap();
            let cut = cutoff_transform(&t, &CutoffWindow::new(3.0).unwrap()).unwrap();
            let grid = sphere_grid(d, res).unwrap();
            let full = eigen_hermitian(&build_nodal(&t, &grid).unwrap(), false).unwrap().values;
            let kept = eigen_hermitian(&build_nodal(&cut, &grid).unwrap(), false).unwrap().values;
            for (x, y) in full.iter().zip(&kept).take(10) {
                assert!((x - y).abs() <= 1e-6 * x.abs(), "{x} {y}");
            }
        }
    }
}
