use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::dim::Dim;
use crate::error::{Error, Result};
use crate::quad::{dyadic_origin, panel_rule, SphereGrid};
use crate::radial_toeplitz::RadialSymbol;
use crate::sphere_op::{fourier_radial, SymbolTransform, TransformKind};

/// `C = sup_xi int_S |a_hat(eta - xi)| dS(eta)` in both normalizations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundednessConstant {
    pub d: Dim,
    pub constant: f64,
    /// `pi / (2 pi)^{d/2} * constant`.
    pub prefactored: f64,
}

/// For radial transforms `|eta - xi| = 2 sin(psi / 2)` reduces the sphere
/// integral to one dimension: `2 pi int_0^2 |a_hat(u)| u du` on the sphere and
/// `2 int_0^pi |a_hat(2 sin(tau / 2))| d tau` on the circle. General transforms
/// take the maximum over `grid` of the grid quadrature, which assumes a
/// bounded transform.
pub fn boundedness_constant(t: &SymbolTransform, grid: Option<&SphereGrid>) -> Result<BoundednessConstant> {
    let d = t.d;
    let constant = match &t.kind {
        TransformKind::Radial(p) => match d {
            Dim::Three => 2.0 * PI * dyadic_origin(&|u: f64| p(u).abs() * u, 2.0)?.value,
            Dim::Two => 2.0 * dyadic_origin(&|tau: f64| p(2.0 * (0.5 * tau).sin()).abs(), PI)?.value,
        },
        TransformKind::General { f, .. } => {
            let grid = grid.ok_or_else(|| Error::InvalidArgument("general transforms need a sphere grid".into()))?;
            if grid.d != d {
                return Err(Error::DimensionMismatch { expected: d.get(), found: grid.d.get() });
            }
            let mut sup = 0.0f64;
            let mut zeta = vec![0.0; d.get()];
            for xi in &grid.points {
                let mut s = 0.0;
                for (eta, w) in grid.points.iter().zip(&grid.weights) {
                    for i in 0..d.get() {
                        zeta[i] = eta[i] - xi[i];
                    }
                    s += w * f(&zeta).norm();
                }
                if !s.is_finite() {
                    return Err(Error::Divergent("transform is not integrable on the shifted sphere".into()));
                }
                sup = sup.max(s);
            }
            sup
        }
    };
    Ok(BoundednessConstant { d, constant, prefactored: d.kernel_prefactor() * constant })
}

/// Sampled check of `|a(r)| <= A r^lambda` for large `r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HdReport {
    pub lambda: f64,
    /// Largest sampled ratio `|a(r)| / r^lambda`.
    pub constant: f64,
    /// Slope of the windowed maxima of the ratio against `log r`.
    pub envelope_slope: f64,
    pub bounded: bool,
    /// `lambda` lies in `(-d, -1)`, where a bounded ratio implies a bounded operator.
    pub in_range: bool,
}

impl HdReport {
    pub fn implies_bounded_operator(&self) -> bool {
        self.bounded && self.in_range
    }
}

const HD_SAMPLES: usize = 20_000;
const HD_WINDOWS: usize = 6;
const HD_SLOPE_TOL: f64 = 0.05;

/// Samples the ratio on a logarithmic grid over `[10, 1e4]`.
pub fn hd_check(a: &RadialSymbol, lambda: f64, d: Dim) -> Result<HdReport> {
    if !lambda.is_finite() {
        return Err(Error::InvalidArgument(format!("degree must be finite, got {lambda}")));
    }
    let (lo, hi) = (10f64.ln(), 1e4f64.ln());
    let mut window_max = [0.0f64; HD_WINDOWS];
    let mut constant = 0.0f64;
    for k in 0..HD_SAMPLES {
        let lr = lo + (hi - lo) * k as f64 / (HD_SAMPLES - 1) as f64;
        let ratio = a.eval(lr.exp()).abs() / (lambda * lr).exp();
        let w = (k * HD_WINDOWS / HD_SAMPLES).min(HD_WINDOWS - 1);
        window_max[w] = window_max[w].max(ratio);
        constant = constant.max(ratio);
    }
    let width = (hi - lo) / HD_WINDOWS as f64;
    let pts: Vec<(f64, f64)> = window_max
        .iter()
        .enumerate()
        .filter(|(_, m)| **m > 0.0)
        .map(|(w, m)| (lo + (w as f64 + 0.5) * width, m.ln()))
        .collect();
    let envelope_slope = if pts.len() < 2 { f64::NEG_INFINITY } else { fit_slope(&pts) };
    let dd = d.get() as f64;
    Ok(HdReport {
        lambda,
        constant,
        envelope_slope,
        bounded: constant.is_finite() && envelope_slope <= HD_SLOPE_TOL,
        in_range: lambda > -dd && lambda < -1.0,
    })
}

fn fit_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Admissibility {
    Admissible,
    NotAdmissible,
    Inconclusive,
}

/// Integral of `|phi_hat|` over the hyperplane disk `{xi_1 = 0, |xi| <= 2}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArgfReport {
    /// Ladder sum plus the extrapolated remainder; infinite when not admissible.
    pub integral: f64,
    pub verdict: Admissibility,
    /// Contribution of each dyadic shell `2^{1-k-1} < |xi| <= 2^{1-k}`.
    pub levels: Vec<f64>,
    /// Geometric ratio of the last levels, or the fitted power decay `k^{-p}`.
    pub decay_ratio: f64,
    pub decay_power: f64,
}

impl ArgfReport {
    pub fn admissible(&self) -> bool {
        self.verdict == Admissibility::Admissible
    }
}

/// Dyadic levels evaluated by [`argf_check`] by default.
pub const ARGF_LEVELS: usize = 28;

/// Ladder of dyadic shells towards the origin, where the transform of a
/// slowly decaying gauge is singular. Geometric decay of the shells, or power
/// decay `k^{-p}` with `p > 1.1`, is admissible; `p < 0.9` is not.
pub fn argf_check(phi: &RadialSymbol, d: Dim, levels: usize) -> Result<ArgfReport> {
    if levels < 8 {
        return Err(Error::InvalidArgument(format!("argf ladder needs at least 8 levels, got {levels}")));
    }
    let rule = panel_rule();
    let measure = |rho: f64| match d {
        Dim::Two => 2.0,
        Dim::Three => 2.0 * PI * rho,
    };
    let mut out = Vec::with_capacity(levels);
    for k in 0..levels {
        let hi = 2f64.powi(1 - k as i32);
        let mut s = 0.0;
        for (rho, w) in rule.mapped(0.5 * hi, hi) {
            s += w * fourier_radial(phi, d, rho)?.abs() * measure(rho);
        }
        out.push(s);
    }
    let sum: f64 = out.iter().sum();
    let tail = &out[levels / 2..];
    let last = out[levels - 1];
    if last == 0.0 || sum == 0.0 {
        return Ok(ArgfReport { integral: sum, verdict: Admissibility::Admissible, levels: out, decay_ratio: 0.0, decay_power: f64::INFINITY });
    }
    let ratios: Vec<f64> = out[levels - 4..].windows(2).map(|w| w[1] / w[0]).collect();
    let decay_ratio = ratios.iter().copied().fold(0.0, f64::max);
    let pts: Vec<(f64, f64)> = tail
        .iter()
        .enumerate()
        .filter(|(_, c)| **c > 0.0)
        .map(|(i, c)| (((levels / 2 + i + 1) as f64).ln(), c.ln()))
        .collect();
    let decay_power = -fit_slope(&pts);
    let (verdict, integral) = if decay_ratio <= 0.9 {
        (Admissibility::Admissible, sum + last * decay_ratio / (1.0 - decay_ratio))
    } else if decay_power > 1.1 {
        (Admissibility::Admissible, sum + last * levels as f64 / (decay_power - 1.0))
    } else if decay_power < 0.9 {
        (Admissibility::NotAdmissible, f64::INFINITY)
    } else {
        (Admissibility::Inconclusive, f64::NAN)
    };
    Ok(ArgfReport { integral, verdict, levels: out, decay_ratio, decay_power })
}

/// Combined bound diagnostics for a radial symbol.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub constant: Option<BoundednessConstant>,
    pub admissible: Option<ArgfReport>,
    pub bounds: BTreeMap<String, f64>,
    pub flags: Vec<String>,
}

/// Boundedness constant of `a_hat`, the gauge check with `|a|` as its own
/// gauge and, when `lambda` is given, the homogeneous-decay check.
pub fn bounds_report(a: &RadialSymbol, d: Dim, lambda: Option<f64>) -> Result<BoundsReport> {
    let mut bounds = BTreeMap::new();
    let mut flags = Vec::new();
    let constant = match SymbolTransform::from_symbol(a, d).and_then(|t| boundedness_constant(&t, None)) {
        Ok(c) => {
            bounds.insert("operator_norm_bound".to_string(), c.prefactored);
            bounds.insert("operator_norm_bound_unnormalized".to_string(), c.constant);
            Some(c)
        }
        Err(Error::Divergent(msg)) => {
            flags.push(format!("constant_divergent: {msg}"));
            None
        }
        Err(e) => return Err(e),
    };
    let gauge = {
        let a2 = a.clone();
        RadialSymbol::custom(&format!("|{}|", a.describe()), move |r| a2.eval(r).abs(), a.decay_tag(), a.support_radius())?
    };
    let admissible = match argf_check(&gauge, d, ARGF_LEVELS) {
        Ok(rep) => {
            match rep.verdict {
                Admissibility::Admissible => bounds.insert("gauge_disk_integral".to_string(), rep.integral),
                Admissibility::NotAdmissible => {
                    flags.push("gauge_not_admissible".into());
                    None
                }
                Admissibility::Inconclusive => {
                    flags.push("gauge_inconclusive".into());
                    None
                }
            };
            Some(rep)
        }
        Err(e @ (Error::Divergent(_) | Error::NonConvergence(_))) => {
            flags.push(format!("gauge_unavailable: {e}"));
            None
        }
        Err(e) => return Err(e),
    };
    if let Some(lambda) = lambda {
        let hd = hd_check(a, lambda, d)?;
        bounds.insert("hd_constant".to_string(), hd.constant);
        bounds.insert("hd_envelope_slope".to_string(), hd.envelope_slope);
        if !hd.bounded {
            flags.push("hd_ratio_unbounded".into());
        }
        if !hd.in_range {
            flags.push("hd_degree_out_of_range".into());
        }
    }
    Ok(BoundsReport { constant, admissible, bounds, flags })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::sphere_grid;
    use crate::radial_toeplitz::DecayTag;
    use crate::sphere_op::{build_nodal, operator_norm};

    #[test]
    fn constant_examples() {
        let one = boundedness_constant(&SymbolTransform::constant(Dim::Three, 1.0), None).unwrap();
        assert!((one.constant - 4.0 * PI).abs() < 1e-12);
        assert!((one.prefactored - 4.0 * PI * PI / (2.0 * PI).powf(1.5)).abs() < 1e-12);
        let inv = boundedness_constant(&SymbolTransform::power_law(Dim::Three, 1.0), None).unwrap();
        assert!((inv.constant - 4.0 * PI).abs() < 1e-10, "{inv:?}");
        let beta = 0.5;
        let half = boundedness_constant(&SymbolTransform::power_law(Dim::Three, beta), None).unwrap();
        let closed = 2.0 * PI * 2f64.powf(2.0 - beta) / (2.0 - beta);
        assert!((half.constant - closed).abs() < 1e-10 * closed);
        let r = boundedness_constant(&SymbolTransform::power_law(Dim::Three, 2.0), None);
        assert!(matches!(r, Err(Error::Divergent(_))), "{r:?}");
        let circle = boundedness_constant(&SymbolTransform::constant(Dim::Two, 1.0), None).unwrap();
        assert!((circle.constant - 2.0 * PI).abs() < 1e-12);
        assert!((circle.prefactored - PI).abs() < 1e-12);
        // int_0^{2pi} (2 sin(psi/2))^{-1/2} d psi = 2^{1/2} B(1/4, 1/2)
        let c = boundedness_constant(&SymbolTransform::power_law(Dim::Two, 0.5), None).unwrap();
        let beta_fn = |a: f64, b: f64| {
            crate::specfun::gamma_fn(a).unwrap() * crate::specfun::gamma_fn(b).unwrap() / crate::specfun::gamma_fn(a + b).unwrap()
        };
        assert!((c.constant - 2f64.sqrt() * beta_fn(0.25, 0.5)).abs() < 1e-10, "{c:?}");
    }

    #[test]
    fn general_matches_radial() {
        let grid = sphere_grid(Dim::Three, 24).unwrap();
        let t = SymbolTransform::general(Dim::Three, |z: &[f64]| num_complex::Complex64::new(1.0 + z[0] * z[0], 0.0), true);
        let c = boundedness_constant(&t, Some(&grid)).unwrap();
        // int (1 + (eta_1 - xi_1)^2) dS(eta) = 4 pi (4/3 + xi_1^2), largest at the grid point nearest e_1
        let top = grid.points.iter().map(|p| p[0] * p[0]).fold(0.0, f64::max);
        assert!((c.constant - 4.0 * PI * (4.0 / 3.0 + top)).abs() < 1e-9, "{c:?}");
        assert!(boundedness_constant(&t, None).is_err());
    }

    #[test]
    fn norm_bound_on_power_symbols() {
        for (d, res) in [(Dim::Two, 48), (Dim::Three, 10)] {
            let grid = sphere_grid(d, res).unwrap();
            for lambda in [-1.5, -2.0, -2.5] {
                if lambda <= -(d.get() as f64) {
                    continue;
                }
                let a = RadialSymbol::power(-lambda).unwrap();
                let t = SymbolTransform::from_symbol(&a, d).unwrap();
                let c = boundedness_constant(&t, None).unwrap();
                let m = build_nodal(&t, &grid).unwrap();
                let norm = operator_norm(&m).unwrap();
                assert!(norm <= c.prefactored * (1.0 + 1e-3), "d={d} lambda={lambda}: {norm} vs {}", c.prefactored);
            }
        }
    }

    #[test]
    fn hd_examples() {
        let a = RadialSymbol::power(2.0).unwrap();
        let r = hd_check(&a, -2.0, Dim::Three).unwrap();
        assert!(r.bounded && r.in_range && (r.constant - 1.0).abs() < 1e-12);
        let slow = RadialSymbol::power(0.5).unwrap();
        assert!(!hd_check(&slow, -2.0, Dim::Three).unwrap().bounded);
        let wobble = RadialSymbol::custom("r^-2 (2 + sin r)", |r| (2.0 + r.sin()) / (r * r), DecayTag::Power { lambda: -2.0 }, None).unwrap();
        let r = hd_check(&wobble, -2.0, Dim::Three).unwrap();
        assert!(r.bounded && r.implies_bounded_operator());
        assert!(r.constant <= 3.0 && r.constant > 2.999, "{r:?}");
        assert!(!hd_check(&a, -2.0, Dim::Two).unwrap().in_range);
    }

    #[test]
    fn argf_examples() {
        let inv_sq = RadialSymbol::power(2.0).unwrap();
        let r = argf_check(&inv_sq, Dim::Three, ARGF_LEVELS).unwrap();
        assert!(r.admissible());
        // a_hat = sqrt(pi / 2) / rho, so the disk integral is 2 pi sqrt(pi / 2) * 2
        let expected = 4.0 * PI * (PI / 2.0).sqrt();
        assert!((r.integral - expected).abs() < 1e-10 * expected, "{r:?}");
        let e = argf_check(&RadialSymbol::exponential(1.0).unwrap(), Dim::Three, ARGF_LEVELS).unwrap();
        assert!(e.admissible());
        let inv = RadialSymbol::power(1.0).unwrap();
        assert_eq!(argf_check(&inv, Dim::Three, ARGF_LEVELS).unwrap().verdict, Admissibility::NotAdmissible);
    }

    #[test]
    fn argf_log_damped_gauge() {
        let g = RadialSymbol::custom("t^-1 log(2+t)^-1.5", |t| 1.0 / (t * (2.0 + t).ln().powf(1.5)), DecayTag::Oscillatory, None).unwrap();
        let r = argf_check(&g, Dim::Three, ARGF_LEVELS).unwrap();
        assert!(r.admissible(), "{r:?}");
        assert!(r.integral.is_finite());
    }

    #[test]
    fn report_serializes() {
        let a = RadialSymbol::power(2.0).unwrap();
        let rep = bounds_report(&a, Dim::Three, Some(-2.0)).unwrap();
        assert!(rep.constant.is_some() && rep.flags.is_empty(), "{rep:?}");
        let json = serde_json::to_value(&rep).unwrap();
        for key in ["constant", "admissible", "bounds", "flags"] {
            assert!(json.get(key).is_some());
        }
    }
}
