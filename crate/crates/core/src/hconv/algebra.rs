use serde::{Deserialize, Serialize};

use super::conv::FactorizationReport;
use super::mult::{mult_nodal_matrix, mult_toeplitz_matrix};
use super::symbol::SphereSymbol;
use crate::dim::Dim;
use crate::error::{Error, Result};
use crate::quad::{sphere_grid, SphereGrid};
use crate::specfun::basis_len;
use crate::sphere_op::{eigen_hermitian, operator_norm, Basis, OperatorMatrix};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommutatorNorm {
    /// `"nodal"` or `"harmonic"`.
    pub representation: String,
    pub nmax: Option<usize>,
    /// Frobenius norm of `T_a T_b - T_b T_a`; harmonic values are compressed to degrees `<= nmax / 2`.
    pub norm: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormRung {
    pub nmax: usize,
    pub norm: f64,
    pub sup_abs: f64,
}

/// Diagnostics of the algebra generated by multiplication-type operators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraReport {
    pub commutator_norms: Vec<CommutatorNorm>,
    /// `||T_a T_b - T_{ab}||` in the nodal representation.
    pub product_defect: f64,
    /// `||T_a^2 - T_a||` in the nodal representation when `a` is an indicator on the grid.
    pub idempotence_defect: Option<f64>,
    /// Harmonic operator norms of `T_a` against `sup |a|`.
    pub norm_ladder: Vec<NormRung>,
    /// Eigenvalues of the harmonic `T_a` at the largest `nmax`, when Hermitian.
    pub spectrum_points: Vec<f64>,
    /// Largest distance from a spectrum point to the sampled range of `a`.
    pub range_distance: Option<f64>,
    /// Largest distance from a spectrum point to the interval spanned by the sampled range.
    pub hull_distance: Option<f64>,
    pub residuals: Vec<(f64, f64)>,
}

fn grid_for(d: Dim, nmax: usize) -> Result<SphereGrid> {
    sphere_grid(d, (4 * nmax).max(8))
}

fn compress(m: &OperatorMatrix, d: Dim, keep: usize) -> Result<OperatorMatrix> {
    let len = basis_len(d, keep as isize);
    let mut entries = Vec::with_capacity(len * len);
    for i in 0..len {
        for j in 0..len {
            entries.push(m.get(i, j));
        }
    }
    OperatorMatrix::new(len, entries, Basis::Harmonic { d, nmax: keep })
}

fn commutator(x: &OperatorMatrix, y: &OperatorMatrix) -> Result<OperatorMatrix> {
    x.matmul(y)?.minus(&y.matmul(x)?)
}

/// Commutators, product rule, idempotence, norm ladder and spectrum location
/// for `T_a` and `T_b` on harmonic truncations of degrees `nmax_ladder`.
pub fn algebra_checks(a: &SphereSymbol, b: &SphereSymbol, d: Dim, nmax_ladder: &[usize]) -> Result<AlgebraReport> {
    if a.d != d || b.d != d {
        return Err(Error::DimensionMismatch { expected: d.get(), found: if a.d != d { a.d.get() } else { b.d.get() } });
    }
    let Some(&top) = nmax_ladder.iter().max() else {
        return Err(Error::InvalidArgument("nmax ladder is empty".into()));
    };
    let nodal_grid = grid_for(d, top)?;
    let ta = mult_nodal_matrix(a, &nodal_grid)?;
    let tb = mult_nodal_matrix(b, &nodal_grid)?;
    let mut commutator_norms =
        vec![CommutatorNorm { representation: "nodal".into(), nmax: None, norm: commutator(&ta, &tb)?.frobenius() }];
    let tab = mult_nodal_matrix(&a.times(b)?, &nodal_grid)?;
    let product_defect = ta.matmul(&tb)?.minus(&tab)?.frobenius();
    let idempotence_defect = if a.is_indicator_on(&nodal_grid) {
        Some(ta.matmul(&ta)?.minus(&ta)?.frobenius())
    } else {
        None
    };

    let mut norm_ladder = Vec::new();
    let mut spectrum_points = Vec::new();
    for &nmax in nmax_ladder {
        let grid = grid_for(d, nmax)?;
        let ha = mult_toeplitz_matrix(a, d, nmax, &grid)?;
        let hb = mult_toeplitz_matrix(b, d, nmax, &grid)?;
        let c = compress(&commutator(&ha, &hb)?, d, nmax / 2)?;
        commutator_norms.push(CommutatorNorm { representation: "harmonic".into(), nmax: Some(nmax), norm: c.frobenius() });
        norm_ladder.push(NormRung { nmax, norm: operator_norm(&ha)?, sup_abs: a.sup_abs });
        if nmax == top && ha.hermitian {
            spectrum_points = eigen_hermitian(&ha, false)?.values;
            spectrum_points.sort_by(|x, y| x.total_cmp(y));
        }
    }

    let (range_distance, hull_distance) = if spectrum_points.is_empty() {
        (None, None)
    } else {
        let range: Vec<f64> = a.sample(&sphere_grid(d, 8 * top.max(8))?).iter().map(|z| z.re).collect();
        let lo = range.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = range.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let to_range = |x: f64| range.iter().map(|r| (r - x).abs()).fold(f64::INFINITY, f64::min);
        let to_hull = |x: f64| (lo - x).max(x - hi).max(0.0);
        (
            Some(spectrum_points.iter().map(|&x| to_range(x)).fold(0.0, f64::max)),
            Some(spectrum_points.iter().map(|&x| to_hull(x)).fold(0.0, f64::max)),
        )
    };
    Ok(AlgebraReport {
        commutator_norms,
        product_defect,
        idempotence_defect,
        norm_ladder,
        spectrum_points,
        range_distance,
        hull_distance,
        residuals: Vec::new(),
    })
}

impl AlgebraReport {
    pub fn with_factorization(mut self, f: &FactorizationReport) -> Self {
        self.residuals = f.residuals.clone();
        self
    }

    pub fn nodal_commutator(&self) -> f64 {
        self.commutator_norms.iter().find(|c| c.representation == "nodal").map_or(0.0, |c| c.norm)
    }

    /// Whether the harmonic norms increase along the ladder and never exceed `sup |a|`.
    pub fn norm_ladder_monotone(&self) -> bool {
        self.norm_ladder.windows(2).all(|w| w[1].norm >= w[0].norm)
            && self.norm_ladder.iter().all(|r| r.norm <= r.sup_abs + 1e-10)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cosine_on_the_circle() {
        let a = SphereSymbol::cos_first(Dim::Two);
        let b = SphereSymbol::upper_half(Dim::Two);
        let rep = algebra_checks(&a, &b, Dim::Two, &[8, 16, 32]).unwrap();
        assert_eq!(rep.nodal_commutator(), 0.0);
        assert!(rep.product_defect <= 1e-12);
        assert!(rep.idempotence_defect.is_none());
        assert!(rep.norm_ladder_monotone(), "{:?}", rep.norm_ladder);
        let last = rep.norm_ladder.last().unwrap().norm;
        assert!(last < 1.0 && last > 0.99);
        // the even part is multiplication by x in the Chebyshev basis T_0..T_nmax,
        // whose eigenvalues are the zeros of T_{nmax+1}
        for rung in &rep.norm_ladder {
            let expected = (std::f64::consts::PI / (2.0 * (rung.nmax as f64 + 1.0))).cos();
            assert!((rung.norm - expected).abs() < 1e-10, "{rung:?} vs {expected}");
        }
        assert!(rep.hull_distance.unwrap() <= 1e-12);
        // cos is band-limited, so the compressed commutator is exact
        for c in rep.commutator_norms.iter().filter(|c| c.representation == "harmonic") {
            assert!(c.norm < 1e-12, "{c:?}");
        }
    }

    #[test]
    fn indicator_is_idempotent_and_norms_sandwich() {
        for d in [Dim::Two, Dim::Three] {
            let ladder: &[usize] = if d == Dim::Two { &[8, 16, 32] } else { &[2, 4, 6] };
            let half = SphereSymbol::upper_half(d);
            let shift = SphereSymbol::two_plus_sin(d);
            let rep = algebra_checks(&half, &shift, d, ladder).unwrap();
            assert_eq!(rep.idempotence_defect, Some(0.0));
            assert_eq!(rep.nodal_commutator(), 0.0);
            assert!(rep.norm_ladder.iter().all(|r| r.norm <= r.sup_abs + 1e-10));
            let gaps: Vec<f64> = rep.norm_ladder.iter().map(|r| r.sup_abs - r.norm).collect();
            assert!(gaps.windows(2).all(|w| w[1] <= w[0]), "{d}: {gaps:?}");
            assert!(rep.hull_distance.unwrap() <= 1e-10);
            let shifted = algebra_checks(&shift, &half, d, ladder).unwrap();
            assert!(shifted.norm_ladder_monotone());
            assert!(shifted.hull_distance.unwrap() <= 1e-10);
        }
    }

    #[test]
    fn harmonic_commutator_shrinks() {
        let quarter = SphereSymbol::real(Dim::Two, "first-quadrant", 1.0, |xi| if xi[0] > 0.0 && xi[1] > 0.0 { 1.0 } else { 0.0 }).unwrap();
        let half = SphereSymbol::upper_half(Dim::Two);
        let rep = algebra_checks(&quarter, &half, Dim::Two, &[8, 16, 32]).unwrap();
        let h: Vec<f64> = rep.commutator_norms.iter().filter(|c| c.nmax.is_some()).map(|c| c.norm).collect();
        assert!(h.windows(2).all(|w| w[1] < w[0]), "{h:?}");
        assert_eq!(rep.nodal_commutator(), 0.0);
    }

    #[test]
    fn report_json_keys() {
        let a = SphereSymbol::cos_first(Dim::Two);
        let rep = algebra_checks(&a, &a, Dim::Two, &[4]).unwrap();
        let json = serde_json::to_value(&rep).unwrap();
        for key in ["commutator_norms", "norm_ladder", "spectrum_points", "residuals"] {
            assert!(json.get(key).is_some());
        }
    }
}
