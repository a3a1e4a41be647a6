use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::dim::Dim;
use crate::error::{Error, Result};
use crate::quad::TailPolicy;
use crate::radial_toeplitz::{gamma_sequence, log_log_slope, schatten_probe, RadialSymbol, SchattenReport, SpectralSequence};
use crate::specfun::multiplicity;

/// Exponents for which Schatten sums are reported.
pub const SCHATTEN_EXPONENTS: [f64; 3] = [0.5, 1.0, 2.0];

/// Degree window and slope threshold of the super-polynomial decay check.
pub const DECAY_WINDOW: (usize, usize) = (8, 64);
pub const SUPERPOLY_SLOPE: f64 = -5.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompactnessReport {
    /// `|gamma(n)|` repeated by multiplicity, in decreasing order.
    pub singular_values: Vec<f64>,
    /// `sum s^p` over the computed singular values, keyed by `p`.
    pub schatten_traces: BTreeMap<String, f64>,
    /// Ladder plateau checks for `p >= 1`.
    pub schatten_ladders: Vec<SchattenReport>,
    /// Log-log slope of `|gamma|` over [`DECAY_WINDOW`]; `-inf` when the values vanish.
    pub decay_slope: f64,
    pub superpolynomial: bool,
    pub sequence: SpectralSequence,
}

/// Singular values and Schatten sums of the operator of a compactly supported
/// radial symbol, whose harmonic matrix is diagonal with entries `gamma(n)`.
pub fn compactness_probe(a: &RadialSymbol, d: Dim, nmax: usize, policy: &TailPolicy) -> Result<CompactnessReport> {
    if a.support_radius().is_none() {
        return Err(Error::InvalidArgument("compactness_probe needs a compactly supported symbol".into()));
    }
    let sequence = gamma_sequence(a, d, nmax, policy)?;
    let mut singular_values: Vec<f64> = sequence
        .gammas
        .iter()
        .enumerate()
        .flat_map(|(n, g)| std::iter::repeat(g.abs()).take(multiplicity(d, n)))
        .collect();
    singular_values.sort_by(|x, y| y.total_cmp(x));
    let schatten_traces = SCHATTEN_EXPONENTS
        .iter()
        .map(|&p| (format!("{p}"), singular_values.iter().map(|s| s.powf(p)).sum()))
        .collect();
    let schatten_ladders =
        SCHATTEN_EXPONENTS.iter().filter(|p| **p >= 1.0).map(|&p| schatten_probe(&sequence, p)).collect::<Result<Vec<_>>>()?;
    let (lo, hi) = DECAY_WINDOW;
    let window = &sequence.gammas[lo.min(sequence.gammas.len())..=hi.min(nmax)];
    let decay_slope = if sequence.sup_abs() == 0.0 || window.contains(&0.0) {
        f64::NEG_INFINITY
    } else if nmax < hi {
        return Err(Error::InvalidArgument(format!("decay check needs nmax >= {hi}, got {nmax}")));
    } else {
        log_log_slope(&sequence, lo, hi)?
    };
    Ok(CompactnessReport {
        singular_values,
        schatten_traces,
        schatten_ladders,
        decay_slope,
        superpolynomial: decay_slope < SUPERPOLY_SLOPE,
        sequence,
    })
}
