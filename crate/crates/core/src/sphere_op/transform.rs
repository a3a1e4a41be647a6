use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dim::Dim;
use crate::error::{Error, Result};
use crate::quad::{dyadic_origin, integrate_decaying, integrate_semiaxis, panels, TailPolicy};
use crate::radial_toeplitz::{DecayTag, RadialSymbol, SymbolKind};
use crate::specfun::{bessel_j, gamma_fn};

pub type GeneralFn = Arc<dyn Fn(&[f64]) -> Complex64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    ClosedForm,
    HankelNumeric,
    Supplied,
}

#[derive(Clone)]
pub enum TransformKind {
    /// `a_hat(zeta) = profile(|zeta|)`.
    Radial(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
    /// Arbitrary evaluator on the ball of radius 2. `real_symbol` declares
    /// `a_hat(-zeta) = conj(a_hat(zeta))`.
    General { f: GeneralFn, real_symbol: bool },
}

/// Fourier transform `a_hat` of a symbol, normalized as
/// `(2 pi)^{-d/2} int a(x) e^{-i x . xi} dx`.
#[derive(Clone)]
pub struct SymbolTransform {
    pub d: Dim,
    pub kind: TransformKind,
    pub provenance: Provenance,
    /// `beta` when `a_hat(rho) ~ rho^{-beta}` as `rho -> 0`.
    pub singular_exponent: Option<f64>,
}

impl fmt::Debug for SymbolTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            TransformKind::Radial(_) => "radial",
            TransformKind::General { .. } => "general",
        };
        write!(f, "SymbolTransform(d={}, {kind}, {:?}, beta={:?})", self.d, self.provenance, self.singular_exponent)
    }
}

impl SymbolTransform {
    pub fn radial<F>(d: Dim, profile: F, singular_exponent: Option<f64>) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        SymbolTransform { d, kind: TransformKind::Radial(Arc::new(profile)), provenance: Provenance::Supplied, singular_exponent }
    }

    pub fn general<F>(d: Dim, f: F, real_symbol: bool) -> Self
    where
        F: Fn(&[f64]) -> Complex64 + Send + Sync + 'static,
    {
        SymbolTransform {
            d,
            kind: TransformKind::General { f: Arc::new(f), real_symbol },
            provenance: Provenance::Supplied,
            singular_exponent: None,
        }
    }

    pub fn constant(d: Dim, c: f64) -> Self {
        Self::radial(d, move |_| c, None)
    }

    /// `a_hat(zeta) = |zeta|^{-beta}`.
    pub fn power_law(d: Dim, beta: f64) -> Self {
        Self::radial(d, move |rho| rho.powf(-beta), (beta > 0.0).then_some(beta))
    }

    /// Transform of the unit point mass at `x0`: `(2 pi)^{-d/2} e^{-i x0 . zeta}`.
    pub fn point_mass(d: Dim, x0: Vec<f64>) -> Result<Self> {
        if x0.len() != d.get() {
            return Err(Error::DimensionMismatch { expected: d.get(), found: x0.len() });
        }
        let scale = (2.0 * PI).powf(-(d.get() as f64) / 2.0);
        Ok(Self::general(
            d,
            move |z| {
                let phase: f64 = x0.iter().zip(z).map(|(a, b)| a * b).sum();
                Complex64::from_polar(scale, -phase)
            },
            true,
        ))
    }

    /// Transform of a radial symbol, closed form where available.
    pub fn from_symbol(a: &RadialSymbol, d: Dim) -> Result<Self> {
        let leaves = a.leaves();
        let mut beta: Option<f64> = None;
        let mut closed = true;
        for (c, leaf) in &leaves {
            if *c == 0.0 {
                continue;
            }
            if let Some(b) = leaf_singularity(leaf, d)? {
                beta = Some(beta.map_or(b, |x: f64| x.max(b)));
            }
            closed &= has_closed_form(leaf);
        }
        let owned = a.clone();
        let profile = move |rho: f64| fourier_radial(&owned, d, rho).unwrap_or(f64::NAN);
        Ok(SymbolTransform {
            d,
            kind: TransformKind::Radial(Arc::new(profile)),
            provenance: if closed { Provenance::ClosedForm } else { Provenance::HankelNumeric },
            singular_exponent: beta,
        })
    }

    pub fn is_radial(&self) -> bool {
        matches!(self.kind, TransformKind::Radial(_))
    }

    /// True when the operator built from this transform is Hermitian.
    pub fn is_real_symbol(&self) -> bool {
        match &self.kind {
            TransformKind::Radial(_) => true,
            TransformKind::General { real_symbol, .. } => *real_symbol,
        }
    }

    pub fn eval_radial(&self, rho: f64) -> Option<f64> {
        match &self.kind {
            TransformKind::Radial(p) => Some(p(rho)),
            TransformKind::General { .. } => None,
        }
    }

    pub fn eval(&self, zeta: &[f64]) -> Complex64 {
        match &self.kind {
            TransformKind::Radial(p) => Complex64::from(p(zeta.iter().map(|v| v * v).sum::<f64>().sqrt())),
            TransformKind::General { f, .. } => f(zeta),
        }
    }
}

fn has_closed_form(leaf: &RadialSymbol) -> bool {
    !matches!(leaf.kind(), SymbolKind::Custom { .. })
}

fn leaf_singularity(leaf: &RadialSymbol, d: Dim) -> Result<Option<f64>> {
    let dd = d.get() as f64;
    Ok(match leaf.kind() {
        SymbolKind::Power { mu } => {
            if !(*mu < dd) {
                return Err(Error::Divergent(format!("r^-{mu} is not locally integrable in dimension {d}")));
            }
            Some(dd - mu)
        }
        SymbolKind::Custom { decay: DecayTag::Power { lambda }, .. } if dd + lambda > 0.0 => Some(dd + lambda),
        _ => None,
    })
}

/// Radial Fourier transform
/// `a_hat(rho) = rho^{-(d-2)/2} int_0^inf a(r) J_{(d-2)/2}(rho r) r^{d/2} dr`.
pub fn fourier_radial(a: &RadialSymbol, d: Dim, rho: f64) -> Result<f64> {
    if !(rho >= 0.0) || !rho.is_finite() {
        return Err(Error::Domain(format!("transform radius must be finite and >= 0, got {rho}")));
    }
    let mut total = 0.0;
    for (c, leaf) in a.leaves() {
        if c != 0.0 {
            total += c * leaf_transform(&leaf, d, rho)?;
        }
    }
    Ok(total)
}

fn leaf_transform(a: &RadialSymbol, d: Dim, rho: f64) -> Result<f64> {
    let dd = d.get() as f64;
    let half = dd / 2.0;
    Ok(match a.kind() {
        SymbolKind::Zero => 0.0,
        SymbolKind::Gaussian { s } => s.powf(dd) * (-0.5 * s * s * rho * rho).exp(),
        SymbolKind::Power { mu } => {
            if !(*mu < dd) {
                return Err(Error::Divergent(format!("r^-{mu} is not locally integrable in dimension {d}")));
            }
            if rho == 0.0 {
                return Err(Error::Divergent(format!("transform of r^-{mu} is singular at the origin")));
            }
            2f64.powf(half - mu) * gamma_fn((dd - mu) / 2.0)? / gamma_fn(mu / 2.0)? * rho.powf(mu - dd)
        }
        SymbolKind::Exponential { rate } => {
            let x = rho / rate;
            let base = match d {
                Dim::Two => (1.0 + x * x).powf(-1.5),
                Dim::Three => (2.0 / PI).sqrt() * 2.0 / ((1.0 + x * x) * (1.0 + x * x)),
            };
            base / rate.powf(dd)
        }
        SymbolKind::Indicator { rho: r0 } => {
            if rho == 0.0 {
                r0.powf(dd) / (2f64.powf(half) * gamma_fn(half + 1.0)?)
            } else {
                r0.powf(half) * bessel_j(half, r0 * rho)? / rho.powf(half)
            }
        }
        // e^{i alpha |x|^2} transforms to (i / (2 alpha))^{d/2} e^{-i |xi|^2 / (4 alpha)}
        SymbolKind::Chirp => 2f64.powf(half) * (0.25 * PI * dd - rho * rho).sin(),
        SymbolKind::Custom { .. } => hankel_numeric(a, d, rho)?,
        SymbolKind::Combination(_) => fourier_radial(a, d, rho)?,
    })
}

/// Numerical Hankel transform after the substitution `t = rho r`.
fn hankel_numeric(a: &RadialSymbol, d: Dim, rho: f64) -> Result<f64> {
    let s = d.order_shift();
    let dd = d.get() as f64;
    let support = a.support_radius();
    if rho == 0.0 {
        let g = |r: f64| a.eval(r) * r.powf(dd - 1.0);
        let norm = 2f64.powf(s) * gamma_fn(s + 1.0)?;
        let v = match (support, a.decay_tag()) {
            (Some(top), _) => dyadic_origin(&g, top.min(1.0))?.value + panels(&g, top.min(1.0), top, 0.25),
            (None, DecayTag::L1) => integrate_decaying(g, 1.0, 1e4)?.value,
            _ => return Err(Error::Divergent("transform at the origin needs an integrable symbol".into())),
        };
        return Ok(v / norm);
    }
    let g = |t: f64| {
        let j = bessel_j(s, t).unwrap_or(f64::NAN);
        a.eval(t / rho) * j * t.powf(dd / 2.0)
    };
    let integral = match support {
        Some(top) => {
            let end = top * rho;
            let cell = end.min(0.25 * PI);
            dyadic_origin(&g, cell)?.value + panels(&g, cell, end, 0.25 * PI)
        }
        None => {
            let est = integrate_semiaxis(g, &TailPolicy::default())?;
            if !est.converged && est.error_bound > 1e-6 * est.value.abs() {
                return Err(Error::NonConvergence(format!(
                    "Hankel transform at rho={rho}: error bound {:e}",
                    est.error_bound
                )));
            }
            est.value
        }
    };
    Ok(integral / rho.powf(dd))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn custom_copy(a: &RadialSymbol) -> RadialSymbol {
        let owned = a.clone();
        RadialSymbol::custom("copy", move |r| owned.eval(r), a.decay_tag(), a.support_radius()).unwrap()
    }

    #[test]
    fn gaussian_is_self_dual() {
        let g = RadialSymbol::gaussian(1.0).unwrap();
        for d in [Dim::Two, Dim::Three] {
            for rho in [0.0, 0.3, 1.0, 2.0] {
                assert!((fourier_radial(&g, d, rho).unwrap() - (-0.5 * rho * rho).exp()).abs() < 1e-15);
                let num = fourier_radial(&custom_copy(&g), d, rho).unwrap();
                assert!((num - (-0.5 * rho * rho).exp()).abs() < 1e-10, "{d} {rho}: {num}");
            }
        }
    }

    #[test]
    fn closed_forms_match_numeric_transform() {
        let cases = [RadialSymbol::exponential(1.0).unwrap(), RadialSymbol::indicator(1.0).unwrap(), RadialSymbol::exponential(2.5).unwrap()];
        for a in &cases {
            for d in [Dim::Two, Dim::Three] {
                for rho in [0.0, 0.1, 0.7, 1.5, 2.0] {
                    let closed = fourier_radial(a, d, rho).unwrap();
                    let num = fourier_radial(&custom_copy(a), d, rho).unwrap();
                    assert!((closed - num).abs() < 1e-9 * closed.abs().max(1e-3), "{a:?} {d} {rho}: {closed} vs {num}");
                }
            }
        }
    }

    #[test]
    fn inverse_square_in_space() {
        let a = RadialSymbol::power(2.0).unwrap();
        let v = fourier_radial(&a, Dim::Three, 1.0).unwrap();
        assert!((v - (PI / 2.0).sqrt()).abs() < 1e-14);
        assert!((fourier_radial(&a, Dim::Three, 0.5).unwrap() - 2.0 * v).abs() < 1e-14);
        // numeric path with the same decay tag
        let c = RadialSymbol::custom("r^-2", |r| r.powi(-2), DecayTag::Power { lambda: -2.0 }, None).unwrap();
        assert!((fourier_radial(&c, Dim::Three, 1.0).unwrap() - v).abs() < 1e-7);
        assert!(fourier_radial(&a, Dim::Three, 0.0).is_err());
        assert!(fourier_radial(&RadialSymbol::power(2.0).unwrap(), Dim::Two, 1.0).is_err());
    }

    #[test]
    fn indicator_at_origin() {
        let a = RadialSymbol::indicator(1.0).unwrap();
        assert!((fourier_radial(&a, Dim::Two, 0.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((fourier_radial(&a, Dim::Two, 1e-6).unwrap() - 0.5).abs() < 1e-10);
    }

    #[test]
    fn transform_metadata() {
        let t = SymbolTransform::from_symbol(&RadialSymbol::power(2.0).unwrap(), Dim::Three).unwrap();
        assert_eq!(t.singular_exponent, Some(1.0));
        assert_eq!(t.provenance, Provenance::ClosedForm);
        let e = SymbolTransform::from_symbol(&RadialSymbol::exponential(1.0).unwrap(), Dim::Two).unwrap();
        assert_eq!(e.singular_exponent, None);
        assert!((e.eval(&[0.6, 0.8]).re - 2f64.powf(-1.5)).abs() < 1e-15);
        let pm = SymbolTransform::point_mass(Dim::Two, vec![1.0, 0.0]).unwrap();
        let v = pm.eval(&[0.5, 0.0]);
        assert!((v - Complex64::from_polar(1.0 / (2.0 * PI), -0.5)).norm() < 1e-15);
        assert!(SymbolTransform::point_mass(Dim::Three, vec![0.0]).is_err());
    }
}
