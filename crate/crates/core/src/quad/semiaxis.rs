use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::rules::{dyadic_origin, levin_limit, panel_rule, panels, QuadEstimate};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Acceleration {
    None,
    SequenceExtrapolation,
}

/// Placement of block edges beyond the transition point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockEdges {
    /// Edges at integer multiples of `period`.
    Periodic,
    /// Edges at `sqrt(k pi / rate)`, the half-periods of `sin(rate r^2)`.
    Chirp { rate: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailPolicy {
    /// Truncation radius when no acceleration is used.
    pub r_max: f64,
    /// Number of blocks handed to the extrapolation.
    pub blocks: usize,
    pub acceleration: Acceleration,
    /// Blocks start at the first edge at or beyond this radius.
    pub transition: f64,
    /// Block length for periodic edges.
    pub period: f64,
    pub edges: BlockEdges,
    /// Relative tolerance for the convergence flag.
    pub tolerance: f64,
}

impl Default for TailPolicy {
    fn default() -> Self {
        TailPolicy {
            r_max: 400.0 * PI,
            blocks: 24,
            acceleration: Acceleration::SequenceExtrapolation,
            transition: 8.0,
            period: PI,
            edges: BlockEdges::Periodic,
            tolerance: 1e-8,
        }
    }
}

impl TailPolicy {
    /// Plain truncation at `r_max` without extrapolation.
    pub fn truncated() -> Self {
        TailPolicy { acceleration: Acceleration::None, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r_max > 0.0) {
            return Err(Error::InvalidArgument(format!("r_max must be positive, got {}", self.r_max)));
        }
        if self.blocks < 4 {
            return Err(Error::InvalidArgument(format!("at least 4 blocks required, got {}", self.blocks)));
        }
        if !(self.period > 0.0) || !(self.transition >= 0.0) {
            return Err(Error::InvalidArgument("period must be positive and transition nonnegative".into()));
        }
        if let BlockEdges::Chirp { rate } = self.edges {
            if !(rate > 0.0) {
                return Err(Error::InvalidArgument(format!("chirp rate must be positive, got {rate}")));
            }
        }
        Ok(())
    }

    fn edge(&self, k: usize) -> f64 {
        match self.edges {
            BlockEdges::Periodic => k as f64 * self.period,
            BlockEdges::Chirp { rate } => (k as f64 * PI / rate).sqrt(),
        }
    }

    fn first_block_index(&self) -> usize {
        let k = match self.edges {
            BlockEdges::Periodic => (self.transition / self.period).ceil(),
            BlockEdges::Chirp { rate } => (rate * self.transition * self.transition / PI).ceil(),
        };
        (k as usize).max(1)
    }

    fn panel_len(&self) -> f64 {
        match self.edges {
            BlockEdges::Periodic => 0.5 * self.period,
            BlockEdges::Chirp { .. } => 0.5 * self.period.min(PI),
        }
    }
}

/// `int_0^inf f(r) dr` for integrands that are integrable at the origin and
/// either absolutely integrable or oscillatory with decaying amplitude.
///
/// The head `[0, r_0]` is integrated by dyadic grading towards the origin and
/// Gauss–Legendre panels; beyond `r_0` the integral is split into blocks whose
/// sums are either added up to `r_max` or extrapolated by the Levin u-transform.
pub fn integrate_semiaxis<F>(f: F, policy: &TailPolicy) -> Result<QuadEstimate>
where
    F: Fn(f64) -> f64 + Sync,
{
    policy.validate()?;
    let k0 = policy.first_block_index();
    let panel = policy.panel_len();

    // head: origin cell graded dyadically, then panels between the edges below r_0
    let first = policy.edge(1).min(panel);
    let origin = dyadic_origin(&f, first)?;
    let mut head = origin.value;
    let mut lo = first;
    for k in 1..=k0 {
        let hi = policy.edge(k);
        if hi > lo {
            head += panels(&f, lo, hi, panel);
            lo = hi;
        }
    }

    let block = |j: usize| panels(&f, policy.edge(k0 + j), policy.edge(k0 + j + 1), panel);
    let (tail, tail_err, converged) = match policy.acceleration {
        Acceleration::SequenceExtrapolation => {
            let terms: Vec<f64> = (0..policy.blocks).into_par_iter().map(block).collect();
            let est = levin_limit(&terms);
            (est.value, est.error_bound, est.converged)
        }
        Acceleration::None => {
            let mut count = 0usize;
            while policy.edge(k0 + count + 1) <= policy.r_max {
                count += 1;
            }
            let count = count.max(policy.blocks);
            let terms: Vec<f64> = (0..count).into_par_iter().map(block).collect();
            let sum: f64 = terms.iter().sum();
            let err = terms.iter().rev().take(2).map(|t| t.abs()).fold(0.0, f64::max);
            (sum, err, true)
        }
    };
    let value = head + tail;
    let error_bound = origin.error_bound + tail_err + 1e-15 * head.abs();
    let converged = converged && origin.converged && error_bound <= policy.tolerance * value.abs().max(1e-300);
    Ok(QuadEstimate { value, error_bound, converged })
}

/// `int_0^inf f(r) dr` for absolutely integrable, non-oscillatory or fast
/// decaying integrands: panels are added until several in a row are negligible.
pub fn integrate_decaying<F>(f: F, panel: f64, r_max: f64) -> Result<QuadEstimate>
where
    F: Fn(f64) -> f64,
{
    let origin = dyadic_origin(&f, panel)?;
    let rule = panel_rule();
    let mut sum = origin.value;
    let mut lo = panel;
    let mut quiet = 0usize;
    let mut last = 0.0f64;
    while lo < r_max {
        let c = rule.integrate(lo, lo + panel, &f);
        sum += c;
        lo += panel;
        last = c;
        if c.abs() <= 1e-17 * sum.abs() || (c == 0.0 && sum == 0.0) {
            quiet += 1;
            if quiet >= 4 {
                return Ok(QuadEstimate {
                    value: sum,
                    error_bound: origin.error_bound + c.abs() + 1e-15 * sum.abs(),
                    converged: origin.converged,
                });
            }
        } else {
            quiet = 0;
        }
    }
    Ok(QuadEstimate { value: sum, error_bound: origin.error_bound + last.abs(), converged: false })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::bessel_j;

    #[test]
    fn exponential() {
        let r = integrate_semiaxis(|x: f64| (-x).exp(), &TailPolicy::default()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-14, "{r:?}");
        assert!(r.error_bound >= (r.value - 1.0).abs());
        let r = integrate_decaying(|x: f64| (-x).exp(), 1.0, 1e3).unwrap();
        assert!((r.value - 1.0).abs() < 1e-14 && r.converged);
    }

    #[test]
    fn squared_half_order_bessel_over_r() {
        let f = |x: f64| {
            let j = bessel_j(0.5, x).unwrap();
            j * j / x
        };
        let r = integrate_semiaxis(f, &TailPolicy::default()).unwrap();
        let err = (r.value - 1.0).abs();
        assert!(err < 1e-8, "{r:?}");
        assert!(err <= r.error_bound);
    }

    #[test]
    fn truncation_without_acceleration_is_coarser() {
        let f = |x: f64| {
            let j = bessel_j(0.5, x).unwrap();
            j * j / x
        };
        let r = integrate_semiaxis(f, &TailPolicy::truncated()).unwrap();
        // the non-oscillatory tail 1/(pi r^2) beyond 400 pi is not captured
        assert!((r.value - 1.0).abs() < 1e-3);
        assert!((r.value - 1.0).abs() > 1e-6);
    }

    #[test]
    fn chirp_with_bessel_weight() {
        // int_0^inf sin(r^2/4) J_{1/2}(r)^2 r dr, reference from 30-digit contour quadrature
        let reference = 1.124_023_661_584_883_916_278_266_918_88 / PI;
        let policy = TailPolicy { transition: 40.0, edges: BlockEdges::Chirp { rate: 0.25 }, ..TailPolicy::default() };
        let f = |x: f64| {
            let j = bessel_j(0.5, x).unwrap();
            (0.25 * x * x).sin() * j * j * x
        };
        let r = integrate_semiaxis(f, &policy).unwrap();
        let err = (r.value - reference).abs();
        assert!(err < 1e-7, "{r:?} vs {reference}");
        assert!(err <= r.error_bound, "err {err:e} bound {:e}", r.error_bound);
    }

    #[test]
    fn compact_support_tail_is_zero() {
        let f = |x: f64| if x < PI { x.sin() } else { 0.0 };
        let r = integrate_semiaxis(f, &TailPolicy::default()).unwrap();
        assert!((r.value - 2.0).abs() < 1e-14, "{r:?}");
    }

    #[test]
    fn policy_validation() {
        let bad = TailPolicy { blocks: 3, ..TailPolicy::default() };
        assert!(integrate_semiaxis(|x: f64| (-x).exp(), &bad).is_err());
        let bad = TailPolicy { r_max: 0.0, ..TailPolicy::default() };
        assert!(bad.validate().is_err());
    }
}
