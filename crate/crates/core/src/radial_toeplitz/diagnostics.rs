use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::gamma::{gamma_sequence, SpectralSequence};
use super::symbol::RadialSymbol;
use crate::dim::Dim;
use crate::error::{Error, Result};
use crate::herglotz::SphereFunction;
use crate::quad::TailPolicy;
use crate::specfun::multiplicity;

/// Multiplies each coefficient of degree `n` by `gamma(n)`.
pub fn diag_apply(seq: &SpectralSequence, phi: &SphereFunction) -> Result<SphereFunction> {
    if seq.d != phi.d() {
        return Err(Error::DimensionMismatch { expected: seq.d.get(), found: phi.d().get() });
    }
    if let Some(top) = phi.max_degree() {
        if top > seq.nmax() {
            return Err(Error::IndexOutOfRange(format!(
                "density has degree {top} but the spectral sequence stops at {}",
                seq.nmax()
            )));
        }
    }
    let scaled = phi.coeffs().iter().map(|(idx, c)| (*idx, c * Complex64::from(seq.gammas[idx.n])));
    SphereFunction::from_coeffs(phi.d(), scaled)
}

/// Least-squares slope of `log|gamma(n)|` against `log(n + d/2 - 1)` over
/// `n_lo..=n_hi`, skipping zero entries.
pub fn log_log_slope(seq: &SpectralSequence, n_lo: usize, n_hi: usize) -> Result<f64> {
    if n_hi > seq.nmax() || n_lo >= n_hi {
        return Err(Error::InvalidArgument(format!("bad fit range {n_lo}..={n_hi} for nmax {}", seq.nmax())));
    }
    let shift = seq.d.get() as f64 / 2.0 - 1.0;
    let pts: Vec<(f64, f64)> = (n_lo..=n_hi)
        .filter(|&n| seq.gammas[n] != 0.0 && n as f64 + shift > 0.0)
        .map(|n| ((n as f64 + shift).ln(), seq.gammas[n].abs().ln()))
        .collect();
    if pts.len() < 2 {
        return Err(Error::InvalidArgument("fewer than two nonzero entries in the fit range".into()));
    }
    Ok(fit_slope(&pts))
}

fn fit_slope(pts: &[(f64, f64)]) -> f64 {
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSummary {
    pub sup_abs: f64,
    /// Accumulation point of the computed sequence, when one is visible.
    pub limit_point: Option<f64>,
    pub compact: bool,
    /// Fitted exponent `p` of the tail envelope `max_{m >= n} |gamma(m)| ~ n^p`.
    pub tail_exponent: Option<f64>,
    /// Distinct values, ascending; `0` is added for compact operators.
    pub spec_points: Vec<f64>,
}

// Envelope decay faster than n^-0.1 over the upper half counts as tending to zero.
const COMPACT_EXPONENT: f64 = -0.1;
const ZERO_TAIL: f64 = 1e-12;

/// Spectrum of the diagonal operator from its first `nmax + 1` eigenvalues.
pub fn spectrum_summary(seq: &SpectralSequence) -> SpectrumSummary {
    let sup_abs = seq.sup_abs();
    let len = seq.gammas.len();
    let mut envelope = vec![0.0; len];
    let mut run = 0.0f64;
    for n in (0..len).rev() {
        run = run.max(seq.gammas[n].abs());
        envelope[n] = run;
    }
    let lo = len / 2;
    let tail_max = envelope[lo];
    let pts: Vec<(f64, f64)> = (lo.max(1)..len)
        .filter(|&n| envelope[n] > 0.0)
        .map(|n| ((n as f64).ln(), envelope[n].ln()))
        .collect();
    let tail_exponent = (pts.len() >= 2).then(|| fit_slope(&pts));
    let compact = sup_abs == 0.0
        || tail_max <= ZERO_TAIL * sup_abs
        || tail_exponent.is_some_and(|p| p <= COMPACT_EXPONENT);

    let limit_point = if compact {
        Some(0.0)
    } else {
        let q = &seq.gammas[len - (len / 4).max(1)..];
        let (lo_v, hi_v) = q.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(*v), b.max(*v)));
        (hi_v - lo_v <= 1e-6 * sup_abs.max(1e-300)).then_some(0.5 * (lo_v + hi_v))
    };

    let mut spec_points: Vec<f64> = seq.gammas.clone();
    if compact {
        spec_points.push(0.0);
    }
    spec_points.sort_by(|a, b| a.total_cmp(b));
    let tol = 1e-12 * sup_abs;
    spec_points.dedup_by(|a, b| (*a - *b).abs() <= tol);
    SpectrumSummary { sup_abs, limit_point, compact, tail_exponent, spec_points }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchattenVerdict {
    Member,
    NonMember,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchattenReport {
    pub p: f64,
    /// `(N, sum_{n <= N} N_{n,d} |gamma(n)|^p)` on the doubling ladder.
    pub partial_sums: Vec<(usize, f64)>,
    /// Geometric mean of the last two ratios of successive ladder increments.
    pub increment_ratio: Option<f64>,
    pub verdict: SchattenVerdict,
}

impl SchattenReport {
    pub fn member(&self) -> Option<bool> {
        match self.verdict {
            SchattenVerdict::Member => Some(true),
            SchattenVerdict::NonMember => Some(false),
            SchattenVerdict::Inconclusive => None,
        }
    }
}

/// Increment ratios at or below this value indicate a convergent sum.
pub const SCHATTEN_MEMBER_RATIO: f64 = 0.9;
/// Increment ratios at or above this value indicate a divergent sum.
pub const SCHATTEN_NON_MEMBER_RATIO: f64 = 0.97;

/// Schatten-`p` membership from partial sums on the ladder `N = 8, 16, 32, ...`.
///
/// When the terms behave like `n^{-s}` the increments between rungs shrink
/// by `2^{1-s}`, which is below 1 exactly for summable sequences. At least
/// four rungs are needed for a verdict.
pub fn schatten_probe(seq: &SpectralSequence, p: f64) -> Result<SchattenReport> {
    if !(p >= 1.0) {
        return Err(Error::InvalidArgument(format!("schatten exponent must be >= 1, got {p}")));
    }
    let d = seq.d;
    let mut partial_sums = Vec::new();
    let mut acc = 0.0;
    let mut next = 8usize;
    for (n, g) in seq.gammas.iter().enumerate() {
        acc += multiplicity(d, n) as f64 * g.abs().powf(p);
        if n == next {
            partial_sums.push((n, acc));
            next *= 2;
        }
    }
    let incr: Vec<f64> = partial_sums.windows(2).map(|w| w[1].1 - w[0].1).collect();
    let total = partial_sums.last().map_or(0.0, |x| x.1);
    let tail_zero = incr.len() >= 2 && incr[incr.len() - 2..].iter().all(|v| *v <= 1e-15 * total);
    let mut increment_ratio = None;
    let verdict = if tail_zero || total == 0.0 {
        SchattenVerdict::Member
    } else if partial_sums.len() < 4 {
        SchattenVerdict::Inconclusive
    } else {
        let k = incr.len();
        let r1 = incr[k - 1] / incr[k - 2];
        let r2 = incr[k - 2] / incr[k - 3];
        if r1 > 0.0 && r2 > 0.0 {
            let rho = (r1 * r2).sqrt();
            increment_ratio = Some(rho);
            if rho <= SCHATTEN_MEMBER_RATIO {
                SchattenVerdict::Member
            } else if rho >= SCHATTEN_NON_MEMBER_RATIO {
                SchattenVerdict::NonMember
            } else {
                SchattenVerdict::Inconclusive
            }
        } else {
            SchattenVerdict::Inconclusive
        }
    };
    Ok(SchattenReport { p, partial_sums, increment_ratio, verdict })
}

/// Entries below this fraction of `max |gamma|` count as numerically zero.
pub const RANK_THRESHOLD: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiniteRankReport {
    pub min_abs_gamma: f64,
    pub max_abs_gamma: f64,
    pub nonnegative: bool,
    /// Degrees with `|gamma(n)| > RANK_THRESHOLD max |gamma|`.
    pub numerical_rank: usize,
    /// Same count weighted by the multiplicity of each degree.
    pub rank_with_multiplicity: usize,
    /// Whether every computed degree is strictly positive; `None` for
    /// sign-indefinite symbols.
    pub all_positive: Option<bool>,
    pub sequence: SpectralSequence,
}

/// Spectral values of a compactly supported symbol with a numerical rank count.
pub fn finite_rank_probe(a: &RadialSymbol, d: Dim, nmax: usize, policy: &TailPolicy) -> Result<FiniteRankReport> {
    if a.support_radius().is_none() {
        return Err(Error::InvalidArgument("finite_rank_probe needs a compactly supported symbol".into()));
    }
    let sequence = gamma_sequence(a, d, nmax, policy)?;
    let max_abs_gamma = sequence.sup_abs();
    let min_abs_gamma = sequence.gammas.iter().fold(f64::INFINITY, |m, g| m.min(g.abs()));
    let nonnegative = a.is_nonnegative_sampled();
    let threshold = RANK_THRESHOLD * max_abs_gamma;
    let active: Vec<usize> = (0..sequence.gammas.len())
        .filter(|&n| max_abs_gamma > 0.0 && sequence.gammas[n].abs() > threshold)
        .collect();
    let all_positive = nonnegative.then(|| sequence.gammas.iter().all(|g| *g > 0.0));
    Ok(FiniteRankReport {
        min_abs_gamma,
        max_abs_gamma,
        nonnegative,
        numerical_rank: active.len(),
        rank_with_multiplicity: active.iter().map(|&n| multiplicity(d, n)).sum(),
        all_positive,
        sequence,
    })
}
