//! Real orthonormal spherical harmonics on the circle and the 2-sphere.
//!
//! Ordering within a degree `n`:
//! * circle: `j = 1` is `cos(n theta)`, `j = 2` is `sin(n theta)`;
//! * sphere: `j = 1` is the zonal harmonic, `j = 2m` carries `cos(m phi)` and
//!   `j = 2m + 1` carries `sin(m phi)` for `m = 1..=n`.
//!
//! The associated Legendre functions omit the Condon–Shortley phase.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::dim::Dim;
use crate::error::{Error, Result};

const UNIT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HarmonicIndex {
    pub d: Dim,
    pub n: usize,
    pub j: usize,
}

impl HarmonicIndex {
    pub fn new(d: Dim, n: usize, j: usize) -> Result<Self> {
        let count = multiplicity(d, n);
        if j == 0 || j > count {
            return Err(Error::IndexOutOfRange(format!(
                "harmonic index j={j} outside 1..={count} for degree {n} in dimension {d}"
            )));
        }
        Ok(HarmonicIndex { d, n, j })
    }

    /// Position in the degree-major ordering used by dense coefficient vectors.
    pub fn position(&self) -> usize {
        basis_len(self.d, self.n as isize - 1) + self.j - 1
    }
}

/// Number of linearly independent harmonics of degree `n`.
pub fn multiplicity(d: Dim, n: usize) -> usize {
    match (d, n) {
        (_, 0) => 1,
        (Dim::Two, _) => 2,
        (Dim::Three, _) => 2 * n + 1,
    }
}

/// Number of harmonics with degree at most `nmax`; zero for negative `nmax`.
pub fn basis_len(d: Dim, nmax: isize) -> usize {
    if nmax < 0 {
        return 0;
    }
    (0..=nmax as usize).map(|n| multiplicity(d, n)).sum()
}

/// All indices with degree at most `nmax`, degree-major.
pub fn harmonic_indices(d: Dim, nmax: usize) -> Vec<HarmonicIndex> {
    (0..=nmax)
        .flat_map(|n| (1..=multiplicity(d, n)).map(move |j| HarmonicIndex { d, n, j }))
        .collect()
}

fn check_unit(d: Dim, xi: &[f64]) -> Result<()> {
    if xi.len() != d.get() {
        return Err(Error::DimensionMismatch { expected: d.get(), found: xi.len() });
    }
    let norm = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > UNIT_TOLERANCE {
        return Err(Error::Domain(format!("point is not on the unit sphere: |xi| = {norm}")));
    }
    Ok(())
}

pub fn sph_harmonic(idx: HarmonicIndex, xi: &[f64]) -> Result<f64> {
    let idx = HarmonicIndex::new(idx.d, idx.n, idx.j)?;
    check_unit(idx.d, xi)?;
    let all = harmonics_upto(idx.d, idx.n, xi);
    Ok(all[idx.position()])
}

/// Values of every harmonic of degree `<= nmax` at `xi`, degree-major.
///
/// `xi` is assumed to be a unit vector of the right length.
pub fn harmonics_upto(d: Dim, nmax: usize, xi: &[f64]) -> Vec<f64> {
    match d {
        Dim::Two => circle_harmonics(nmax, xi[0], xi[1]),
        Dim::Three => sphere_harmonics(nmax, xi),
    }
}

fn circle_harmonics(nmax: usize, c: f64, s: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(2 * nmax + 1);
    out.push(1.0 / (2.0 * PI).sqrt());
    let norm = 1.0 / PI.sqrt();
    let (mut cn, mut sn) = (1.0, 0.0);
    for _ in 1..=nmax {
        let next_c = cn * c - sn * s;
        let next_s = sn * c + cn * s;
        cn = next_c;
        sn = next_s;
        out.push(norm * cn);
        out.push(norm * sn);
    }
    out
}

fn sphere_harmonics(nmax: usize, xi: &[f64]) -> Vec<f64> {
    let z = xi[2];
    let rho = (xi[0] * xi[0] + xi[1] * xi[1]).sqrt();
    // normalized associated Legendre values, plm[m][l - m]
    let mut plm: Vec<Vec<f64>> = Vec::with_capacity(nmax + 1);
    let mut diag = (1.0 / (4.0 * PI)).sqrt();
    for m in 0..=nmax {
        if m > 0 {
            let mf = m as f64;
            diag *= ((2.0 * mf + 1.0) / (2.0 * mf)).sqrt() * rho;
        }
        let mut column = Vec::with_capacity(nmax - m + 1);
        column.push(diag);
        if m < nmax {
            column.push(z * (2.0 * m as f64 + 3.0).sqrt() * diag);
        }
        for l in (m + 2)..=nmax {
            let lf = l as f64;
            let mf = m as f64;
            let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
            let b = (((lf - 1.0) * (lf - 1.0) - mf * mf) / (4.0 * (lf - 1.0) * (lf - 1.0) - 1.0)).sqrt();
            let v = a * (z * column[l - m - 1] - b * column[l - m - 2]);
            column.push(v);
        }
        plm.push(column);
    }
    // cos(m phi), sin(m phi); the rho^m factor already sits in plm
    let (c1, s1) = if rho > 0.0 { (xi[0] / rho, xi[1] / rho) } else { (1.0, 0.0) };
    let mut cos_m = vec![1.0; nmax + 1];
    let mut sin_m = vec![0.0; nmax + 1];
    for m in 1..=nmax {
        cos_m[m] = cos_m[m - 1] * c1 - sin_m[m - 1] * s1;
        sin_m[m] = sin_m[m - 1] * c1 + cos_m[m - 1] * s1;
    }
    let sqrt2 = 2f64.sqrt();
    let mut out = Vec::with_capacity((nmax + 1) * (nmax + 1));
    for n in 0..=nmax {
        out.push(plm[0][n]);
        for m in 1..=n {
            let p = sqrt2 * plm[m][n - m];
            out.push(p * cos_m[m]);
            out.push(p * sin_m[m]);
        }
    }
    out
}
