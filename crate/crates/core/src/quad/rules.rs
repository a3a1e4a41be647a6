//! Shared panel rules and small building blocks for one-dimensional integrals.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::specfun::{gauss_legendre, GaussLegendre};

/// Nodes per Gauss–Legendre panel.
pub const PANEL_NODES: usize = 24;

// Stop dyadic grading once a level contributes less than this fraction.
const DYADIC_REL: f64 = 1e-17;
const DYADIC_MAX_LEVELS: usize = 1000;
// Levels without decay after which the origin singularity is declared non-integrable.
const DYADIC_STALL_LEVELS: usize = 40;

pub fn panel_rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(PANEL_NODES).expect("panel size within bounds"))
}

/// Integral over `[a, b]` split into equal panels no longer than `max_len`.
pub fn panels<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, max_len: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let count = ((b - a) / max_len).ceil().max(1.0) as usize;
    let h = (b - a) / count as f64;
    let rule = panel_rule();
    (0..count)
        .map(|i| {
            let lo = a + i as f64 * h;
            let hi = if i + 1 == count { b } else { lo + h };
            rule.integrate(lo, hi, f)
        })
        .sum()
}

/// Result of an integral with an error estimate.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct QuadEstimate {
    pub value: f64,
    pub error_bound: f64,
    pub converged: bool,
}

impl QuadEstimate {
    pub fn exact(value: f64) -> Self {
        QuadEstimate { value, error_bound: 0.0, converged: true }
    }
}

/// Integral over `(0, h]` by dyadic panels `[h 2^{-k-1}, h 2^{-k}]`, suited to
/// integrable power singularities at the origin.
///
/// Stops once levels become negligible and adds a geometric remainder
/// estimate. Returns `Error::Divergent` when the level contributions stop
/// decaying.
pub fn dyadic_origin<F: Fn(f64) -> f64>(f: &F, h: f64) -> Result<QuadEstimate> {
    let rule = panel_rule();
    let mut sum = 0.0;
    let mut hi = h;
    let mut prev = f64::NAN;
    let mut stalled = 0usize;
    let mut quiet = 0usize;
    for _ in 0..DYADIC_MAX_LEVELS {
        let lo = 0.5 * hi;
        let c = rule.integrate(lo, hi, f);
        sum += c;
        hi = lo;
        if !c.is_finite() {
            return Err(Error::Divergent("integrand not finite near the origin".into()));
        }
        if prev.is_finite() && c.abs() >= 0.999 * prev.abs() && c != 0.0 {
            stalled += 1;
            if stalled >= DYADIC_STALL_LEVELS {
                return Err(Error::Divergent(
                    "dyadic contributions near the origin do not decay".into(),
                ));
            }
        } else {
            stalled = 0;
        }
        if c.abs() <= DYADIC_REL * sum.abs() || c == 0.0 {
            quiet += 1;
            if quiet >= 2 {
                let rem = geometric_remainder(prev, c);
                return Ok(QuadEstimate { value: sum + rem, error_bound: rem.abs() + c.abs(), converged: true });
            }
        } else {
            quiet = 0;
        }
        if hi < f64::MIN_POSITIVE * 1e10 {
            break;
        }
        prev = c;
    }
    let rem = geometric_remainder(prev, sum);
    Ok(QuadEstimate { value: sum, error_bound: rem.abs().max(prev.abs()), converged: false })
}

// Remainder of a geometric series whose last two terms are `prev`, `last`.
fn geometric_remainder(prev: f64, last: f64) -> f64 {
    if !prev.is_finite() || prev == 0.0 {
        return 0.0;
    }
    let q = last / prev;
    if q > 0.0 && q < 1.0 {
        last * q / (1.0 - q)
    } else {
        0.0
    }
}

/// Integral over `[t0, inf)` of an integrand with algebraic decay `r^{-p}`,
/// `p > 1`, via `r = t0 u^{-q}` with `q = 1 / (p - 1)`, which maps the tail
/// onto `(0, 1]` with a bounded integrand.
pub fn algebraic_tail<F: Fn(f64) -> f64>(g: &F, t0: f64, p: f64) -> Result<QuadEstimate> {
    if !(p > 1.0) {
        return Err(Error::Divergent(format!("tail decay r^-{p} is not integrable")));
    }
    let q = 1.0 / (p - 1.0);
    let mapped = |u: f64| {
        let r = t0 * u.powf(-q);
        g(r) * q * r / u
    };
    dyadic_origin(&mapped, 1.0)
}

fn binomial_row(k: usize) -> Vec<f64> {
    let mut row = vec![1.0; k + 1];
    for j in 1..=k {
        row[j] = row[j - 1] * (k + 1 - j) as f64 / j as f64;
    }
    row
}

// Levin u-transform of order k over partial sums s[0..=k].
fn levin_u(s: &[f64], terms: &[f64], k: usize) -> Option<f64> {
    const BETA: f64 = 1.0;
    let binom = binomial_row(k);
    let scale = k as f64 + BETA;
    let mut num = 0.0;
    let mut den = 0.0;
    for j in 0..=k {
        let a = terms[j];
        if a == 0.0 || !a.is_finite() {
            return None;
        }
        let jb = j as f64 + BETA;
        let omega = jb * a;
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let c = sign * binom[j] * (jb / scale).powi(k as i32 - 1) / omega;
        num += c * s[j];
        den += c;
    }
    let v = num / den;
    v.is_finite().then_some(v)
}

/// Limit of the series with the given terms by the Levin u-transform.
///
/// The order is chosen where successive transforms agree best; the error
/// bound is ten times that disagreement plus a roundoff floor.
pub fn levin_limit(terms: &[f64]) -> QuadEstimate {
    let mut partial = Vec::with_capacity(terms.len());
    let mut acc = 0.0;
    for t in terms {
        acc += t;
        partial.push(acc);
    }
    let mag = partial.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let floor = 1e-14 * mag;
    let last = *partial.last().unwrap_or(&0.0);

    // tails that already vanish need no extrapolation
    let n = terms.len();
    if n >= 3 && terms[n - 3..].iter().all(|t| t.abs() <= 1e-17 * mag) {
        let tail: f64 = terms[n - 3..].iter().map(|t| t.abs()).sum();
        return QuadEstimate { value: last, error_bound: tail + floor, converged: true };
    }
    let transforms: Vec<Option<f64>> =
        (0..n).map(|k| if k >= 1 { levin_u(&partial, terms, k) } else { None }).collect();
    let mut best: Option<(f64, f64)> = None;
    for k in 3..n {
        if let (Some(a), Some(b), Some(c)) = (transforms[k], transforms[k - 1], transforms[k - 2]) {
            let spread = (a - b).abs().max((a - c).abs());
            if best.map_or(true, |(_, s)| spread < s) {
                best = Some((a, spread));
            }
        }
    }
    match best {
        Some((value, spread)) => QuadEstimate { value, error_bound: 10.0 * spread + floor, converged: true },
        None => {
            let err = terms.iter().rev().take(2).map(|t| t.abs()).fold(0.0, f64::max);
            QuadEstimate { value: last, error_bound: err + floor, converged: false }
        }
    }
}
