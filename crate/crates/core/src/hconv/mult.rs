use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::symbol::SphereSymbol;
use crate::dim::Dim;
use crate::error::{Error, Result};
use crate::herglotz::{HerglotzField, SphereFunction};
use crate::quad::SphereGrid;
use crate::specfun::basis_len;
use crate::sphere_op::{harmonic_change, Basis, OperatorMatrix};

/// Result of applying a multiplication-type operator in the sphere representation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultApply {
    pub result: SphereFunction,
    pub warnings: Vec<String>,
}

fn check(a: &SphereSymbol, grid: &SphereGrid) -> Result<()> {
    if a.d != grid.d {
        return Err(Error::DimensionMismatch { expected: a.d.get(), found: grid.d.get() });
    }
    Ok(())
}

/// `a phi` projected onto degrees up to `deg(phi) + bandwidth`.
pub fn mult_toeplitz_apply(a: &SphereSymbol, phi: &SphereFunction, grid: &SphereGrid, bandwidth: usize) -> Result<MultApply> {
    check(a, grid)?;
    if phi.d() != grid.d {
        return Err(Error::DimensionMismatch { expected: grid.d.get(), found: phi.d().get() });
    }
    let nout = phi.max_degree().unwrap_or(0) + bandwidth;
    let values: Vec<Complex64> = grid.points.iter().map(|p| a.eval(p) * phi.eval(p)).collect();
    let mut warnings = Vec::new();
    if grid.exact_degree() < 2 * nout {
        warnings.push(format!(
            "grid integrates degree {} exactly, below 2 * output degree {nout}; projections may alias",
            grid.exact_degree()
        ));
    }
    Ok(MultApply { result: SphereFunction::analyze(grid, &values, nout)?, warnings })
}

/// Diagonal matrix of `a` in the nodal basis of `grid`.
pub fn mult_nodal_matrix(a: &SphereSymbol, grid: &SphereGrid) -> Result<OperatorMatrix> {
    check(a, grid)?;
    let n = grid.len();
    let mut entries = vec![Complex64::default(); n * n];
    for (k, p) in grid.points.iter().enumerate() {
        entries[k * n + k] = a.eval(p);
    }
    OperatorMatrix::new(n, entries, Basis::Nodal { d: grid.d, resolution: grid.resolution })
}

/// Matrix of `<a Y_b, Y_a>` over real harmonics of degree `<= nmax`, as `B^T diag(a) B`.
pub fn mult_toeplitz_matrix(a: &SphereSymbol, d: Dim, nmax: usize, grid: &SphereGrid) -> Result<OperatorMatrix> {
    check(a, grid)?;
    if a.d != d {
        return Err(Error::DimensionMismatch { expected: d.get(), found: a.d.get() });
    }
    let len = basis_len(d, nmax as isize);
    let b = harmonic_change(grid, nmax);
    let vals = a.sample(grid);
    let mut entries = vec![Complex64::default(); len * len];
    for (k, v) in vals.iter().enumerate() {
        if *v == Complex64::default() {
            continue;
        }
        let row = &b[k * len..(k + 1) * len];
        for i in 0..len {
            let vi = v * row[i];
            for j in 0..len {
                entries[i * len + j] += vi * row[j];
            }
        }
    }
    let mut m = OperatorMatrix::new(len, entries, Basis::Harmonic { d, nmax })?;
    if grid.resolution < 4 * nmax {
        m.warnings.push(format!("grid resolution {} is below 4 nmax = {}", grid.resolution, 4 * nmax));
    }
    Ok(m)
}

/// The kernel field `K = I a`, with `a` expanded to degree `nmax` on `grid`.
pub fn kernel_field(a: &SphereSymbol, nmax: usize, grid: &SphereGrid) -> Result<HerglotzField> {
    check(a, grid)?;
    Ok(HerglotzField::new(SphereFunction::analyze(grid, &a.sample(grid), nmax)?))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::quad::sphere_grid;
    use crate::specfun::HarmonicIndex;

    #[test]
    fn constants_scale() {
        let grid = sphere_grid(Dim::Three, 16).unwrap();
        let phi = SphereFunction::basis(Dim::Three, 2, 3).unwrap().plus(&SphereFunction::basis(Dim::Three, 1, 1).unwrap()).unwrap();
        let one = mult_toeplitz_apply(&SphereSymbol::constant(Dim::Three, Complex64::from(1.0)), &phi, &grid, 0).unwrap();
        assert!(one.result.minus(&phi).unwrap().norm() < 1e-14);
        let c = Complex64::new(0.5, -2.0);
        let scaled = mult_toeplitz_apply(&SphereSymbol::constant(Dim::Three, c), &phi, &grid, 2).unwrap();
        assert!(scaled.result.minus(&phi.scaled(c)).unwrap().norm() < 1e-14);
        assert!(scaled.warnings.is_empty());
    }

    #[test]
    fn half_circle_mean() {
        let grid = sphere_grid(Dim::Two, 64).unwrap();
        let phi = SphereFunction::basis(Dim::Two, 0, 1).unwrap();
        let out = mult_toeplitz_apply(&SphereSymbol::upper_half(Dim::Two), &phi, &grid, 4).unwrap();
        let c0 = out.result.coeff(HarmonicIndex::new(Dim::Two, 0, 1).unwrap());
        assert!((c0.re - 0.5).abs() < 1e-15 && c0.im == 0.0);
        let coarse = sphere_grid(Dim::Two, 8).unwrap();
        assert!(!mult_toeplitz_apply(&SphereSymbol::upper_half(Dim::Two), &phi, &coarse, 4).unwrap().warnings.is_empty());
    }

    #[test]
    fn harmonic_matrices() {
        for d in [Dim::Two, Dim::Three] {
            let nmax = 4;
            let grid = sphere_grid(d, 4 * nmax).unwrap();
            let id = mult_toeplitz_matrix(&SphereSymbol::constant(d, Complex64::from(1.0)), d, nmax, &grid).unwrap();
            for i in 0..id.n {
                for j in 0..id.n {
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((id.get(i, j) - want).norm() < 1e-13);
                }
            }
            let cos = mult_toeplitz_matrix(&SphereSymbol::cos_first(d), d, nmax, &grid).unwrap();
            assert!(cos.is_real() && cos.hermitian);
            let half = mult_toeplitz_matrix(&SphereSymbol::upper_half(d), d, nmax, &grid).unwrap();
            assert!(half.hermitian);
        }
        let grid = sphere_grid(Dim::Two, 16).unwrap();
        let phase = mult_toeplitz_matrix(&SphereSymbol::phase(Dim::Two, 1), Dim::Two, 4, &grid).unwrap();
        assert!(!phase.hermitian && phase.hermitian_defect() > 0.1);
    }

    #[test]
    fn nodal_indicator_is_idempotent() {
        let grid = sphere_grid(Dim::Three, 12).unwrap();
        let m = mult_nodal_matrix(&SphereSymbol::upper_half(Dim::Three), &grid).unwrap();
        let sq = m.matmul(&m).unwrap();
        assert_eq!(sq.minus(&m).unwrap().frobenius(), 0.0);
    }

    #[test]
    fn kernel_of_constant() {
        let grid = sphere_grid(Dim::Two, 16).unwrap();
        let k = kernel_field(&SphereSymbol::constant(Dim::Two, Complex64::from(1.0)), 4, &grid).unwrap();
        // K(0) = c_d |S|
        let expected = Dim::Two.synthesis_constant() * 2.0 * PI;
        assert!((k.eval(&[0.0, 0.0]).unwrap().re - expected).abs() < 1e-13);
    }
}
