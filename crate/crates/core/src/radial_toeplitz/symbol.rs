use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Large-`r` behaviour of a radial symbol, which selects the quadrature path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DecayTag {
    /// Vanishes beyond the support radius.
    Compact,
    /// Absolutely integrable with fast (exponential or Gaussian) decay.
    L1,
    /// `|a(r)| ~ C r^lambda` with a monotone profile.
    Power { lambda: f64 },
    /// Not absolutely integrable but oscillating.
    Oscillatory,
    Other,
}

/// Symbols with a known spectral sequence in closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClosedFormTag {
    /// `sin(r^2 / 4)`.
    Chirp,
    /// `r^{-mu}`.
    Power { mu: f64 },
    /// Indicator of `[0, rho]`.
    Indicator { rho: f64 },
}

pub type ProfileFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum SymbolKind {
    Zero,
    /// `r^{-mu}`
    Power { mu: f64 },
    /// `exp(-r^2 / (2 s^2))`
    Gaussian { s: f64 },
    /// `exp(-rate r)`
    Exponential { rate: f64 },
    /// Indicator of `[0, rho]`
    Indicator { rho: f64 },
    /// `sin(r^2 / 4)`
    Chirp,
    Custom { name: String, f: ProfileFn, decay: DecayTag, support: Option<f64> },
    Combination(Vec<(f64, RadialSymbol)>),
}

/// A radial function `a(|x|)` on `R^d`.
#[derive(Clone)]
pub struct RadialSymbol {
    kind: SymbolKind,
}

impl fmt::Debug for RadialSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RadialSymbol({})", self.describe())
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{name} must be positive and finite, got {v}")))
    }
}

impl RadialSymbol {
    pub fn zero() -> Self {
        RadialSymbol { kind: SymbolKind::Zero }
    }

    pub fn power(mu: f64) -> Result<Self> {
        positive("mu", mu)?;
        Ok(RadialSymbol { kind: SymbolKind::Power { mu } })
    }

    pub fn gaussian(s: f64) -> Result<Self> {
        positive("s", s)?;
        Ok(RadialSymbol { kind: SymbolKind::Gaussian { s } })
    }

    pub fn exponential(rate: f64) -> Result<Self> {
        positive("rate", rate)?;
        Ok(RadialSymbol { kind: SymbolKind::Exponential { rate } })
    }

    pub fn indicator(rho: f64) -> Result<Self> {
        positive("rho", rho)?;
        Ok(RadialSymbol { kind: SymbolKind::Indicator { rho } })
    }

    pub fn chirp() -> Self {
        RadialSymbol { kind: SymbolKind::Chirp }
    }

    pub fn custom<F>(name: &str, f: F, decay: DecayTag, support: Option<f64>) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        match (decay, support) {
            (DecayTag::Compact, Some(s)) => positive("support", s)?,
            (DecayTag::Compact, None) => {
                return Err(Error::InvalidArgument("compact symbols need a support radius".into()))
            }
            (_, Some(_)) => {
                return Err(Error::InvalidArgument("support radius given for a non-compact decay tag".into()))
            }
            _ => {}
        }
        Ok(RadialSymbol { kind: SymbolKind::Custom { name: name.to_string(), f: Arc::new(f), decay, support } })
    }

    /// `sum_i c_i a_i`.
    pub fn combination(terms: Vec<(f64, RadialSymbol)>) -> Result<Self> {
        if terms.iter().any(|(c, _)| !c.is_finite()) {
            return Err(Error::InvalidArgument("combination coefficients must be finite".into()));
        }
        Ok(RadialSymbol { kind: SymbolKind::Combination(terms) })
    }

    pub fn kind(&self) -> &SymbolKind {
        &self.kind
    }

    pub fn eval(&self, r: f64) -> f64 {
        match &self.kind {
            SymbolKind::Zero => 0.0,
            SymbolKind::Power { mu } => r.powf(-mu),
            SymbolKind::Gaussian { s } => (-0.5 * r * r / (s * s)).exp(),
            SymbolKind::Exponential { rate } => (-rate * r).exp(),
            SymbolKind::Indicator { rho } => {
                if r <= *rho {
                    1.0
                } else {
                    0.0
                }
            }
            SymbolKind::Chirp => (0.25 * r * r).sin(),
            SymbolKind::Custom { f, support, .. } => match support {
                Some(s) if r > *s => 0.0,
                _ => f(r),
            },
            SymbolKind::Combination(terms) => terms.iter().map(|(c, a)| c * a.eval(r)).sum(),
        }
    }

    /// Radius beyond which the symbol vanishes; `None` for unbounded support.
    pub fn support_radius(&self) -> Option<f64> {
        match &self.kind {
            SymbolKind::Zero => Some(0.0),
            SymbolKind::Indicator { rho } => Some(*rho),
            SymbolKind::Custom { support, .. } => *support,
            SymbolKind::Combination(terms) => terms
                .iter()
                .filter(|(c, _)| *c != 0.0)
                .map(|(_, a)| a.support_radius())
                .try_fold(0.0f64, |m, s| s.map(|s| m.max(s))),
            _ => None,
        }
    }

    pub fn decay_tag(&self) -> DecayTag {
        match &self.kind {
            SymbolKind::Zero | SymbolKind::Indicator { .. } => DecayTag::Compact,
            SymbolKind::Power { mu } => DecayTag::Power { lambda: -mu },
            SymbolKind::Gaussian { .. } | SymbolKind::Exponential { .. } => DecayTag::L1,
            SymbolKind::Chirp => DecayTag::Oscillatory,
            SymbolKind::Custom { decay, .. } => *decay,
            SymbolKind::Combination(terms) => {
                let mut tag = DecayTag::Compact;
                for (c, a) in terms {
                    if *c != 0.0 {
                        tag = weaker(tag, a.decay_tag());
                    }
                }
                tag
            }
        }
    }

    pub fn closed_form_tag(&self) -> Option<ClosedFormTag> {
        match &self.kind {
            SymbolKind::Chirp => Some(ClosedFormTag::Chirp),
            SymbolKind::Power { mu } => Some(ClosedFormTag::Power { mu: *mu }),
            SymbolKind::Indicator { rho } => Some(ClosedFormTag::Indicator { rho: *rho }),
            _ => None,
        }
    }

    /// Short human-readable description used in reports.
    pub fn describe(&self) -> String {
        match &self.kind {
            SymbolKind::Zero => "0".into(),
            SymbolKind::Power { mu } => format!("r^-{mu}"),
            SymbolKind::Gaussian { s } => format!("exp(-r^2/(2*{s}^2))"),
            SymbolKind::Exponential { rate } => format!("exp(-{rate}*r)"),
            SymbolKind::Indicator { rho } => format!("1[r<={rho}]"),
            SymbolKind::Chirp => "sin(r^2/4)".into(),
            SymbolKind::Custom { name, .. } => name.clone(),
            SymbolKind::Combination(terms) => terms
                .iter()
                .map(|(c, a)| format!("{c}*({})", a.describe()))
                .collect::<Vec<_>>()
                .join(" + "),
        }
    }

    /// True when `a >= 0` at 4096 equispaced samples of the support, or of
    /// `(0, 64]` for unbounded support.
    pub fn is_nonnegative_sampled(&self) -> bool {
        let top = self.support_radius().unwrap_or(64.0);
        (1..=4096).all(|k| self.eval(top * k as f64 / 4096.0) >= 0.0)
    }

    /// `(coefficient, leaf)` pairs with nested combinations expanded.
    pub(crate) fn leaves(&self) -> Vec<(f64, RadialSymbol)> {
        match &self.kind {
            SymbolKind::Combination(terms) => terms
                .iter()
                .flat_map(|(c, a)| a.leaves().into_iter().map(move |(k, leaf)| (c * k, leaf)))
                .collect(),
            _ => vec![(1.0, self.clone())],
        }
    }
}

fn weaker(a: DecayTag, b: DecayTag) -> DecayTag {
    use DecayTag::*;
    match (a, b) {
        (Other, _) | (_, Other) => Other,
        (Oscillatory, _) | (_, Oscillatory) => Oscillatory,
        (Power { lambda: x }, Power { lambda: y }) => Power { lambda: x.max(y) },
        (Power { lambda }, _) | (_, Power { lambda }) => Power { lambda },
        (L1, _) | (_, L1) => L1,
        (Compact, Compact) => Compact,
    }
}
