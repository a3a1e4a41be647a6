use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dim::Dim;
use crate::error::{Error, Result};
use crate::quad::SphereGrid;
use crate::specfun::{basis_len, harmonic_indices, harmonics_upto, HarmonicIndex};

/// A finite real-spherical-harmonic expansion on `S^{d-1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "SerializedSphereFunction", try_from = "SerializedSphereFunction")]
pub struct SphereFunction {
    d: Dim,
    coeffs: BTreeMap<HarmonicIndex, Complex64>,
}

impl SphereFunction {
    pub fn zero(d: Dim) -> Self {
        SphereFunction { d, coeffs: BTreeMap::new() }
    }

    /// The single harmonic `Y_{n,j}`.
    pub fn basis(d: Dim, n: usize, j: usize) -> Result<Self> {
        let mut f = Self::zero(d);
        f.set(HarmonicIndex::new(d, n, j)?, Complex64::new(1.0, 0.0))?;
        Ok(f)
    }

    pub fn from_coeffs<I>(d: Dim, coeffs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (HarmonicIndex, Complex64)>,
    {
        let mut f = Self::zero(d);
        for (idx, c) in coeffs {
            f.add(idx, c)?;
        }
        Ok(f)
    }

    pub fn d(&self) -> Dim {
        self.d
    }

    pub fn coeffs(&self) -> &BTreeMap<HarmonicIndex, Complex64> {
        &self.coeffs
    }

    pub fn coeff(&self, idx: HarmonicIndex) -> Complex64 {
        self.coeffs.get(&idx).copied().unwrap_or_default()
    }

    fn check(&self, idx: HarmonicIndex) -> Result<()> {
        if idx.d != self.d {
            return Err(Error::DimensionMismatch { expected: self.d.get(), found: idx.d.get() });
        }
        HarmonicIndex::new(idx.d, idx.n, idx.j).map(|_| ())
    }

    pub fn set(&mut self, idx: HarmonicIndex, c: Complex64) -> Result<()> {
        self.check(idx)?;
        if c == Complex64::default() {
            self.coeffs.remove(&idx);
        } else {
            self.coeffs.insert(idx, c);
        }
        Ok(())
    }

    pub fn add(&mut self, idx: HarmonicIndex, c: Complex64) -> Result<()> {
        let v = self.coeff(idx) + c;
        self.set(idx, v)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Highest degree carrying a coefficient; `None` for the zero function.
    pub fn max_degree(&self) -> Option<usize> {
        self.coeffs.keys().map(|i| i.n).max()
    }

    pub fn norm_sq(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(k, v)| (*k, v * s))
            .filter(|(_, v)| *v != Complex64::default())
            .collect();
        SphereFunction { d: self.d, coeffs }
    }

    pub fn plus(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        for (k, v) in &other.coeffs {
            out.add(*k, *v)?;
        }
        Ok(out)
    }

    pub fn minus(&self, other: &Self) -> Result<Self> {
        self.plus(&other.scaled(Complex64::new(-1.0, 0.0)))
    }

    /// Dense coefficient vector in degree-major order up to `nmax`.
    pub fn dense(&self, nmax: usize) -> Result<Vec<Complex64>> {
        if let Some(top) = self.max_degree() {
            if top > nmax {
                return Err(Error::IndexOutOfRange(format!(
                    "function has degree {top} beyond the requested truncation {nmax}"
                )));
            }
        }
        let mut v = vec![Complex64::default(); basis_len(self.d, nmax as isize)];
        for (k, c) in &self.coeffs {
            v[k.position()] = *c;
        }
        Ok(v)
    }

    pub fn from_dense(d: Dim, nmax: usize, values: &[Complex64]) -> Result<Self> {
        let idx = harmonic_indices(d, nmax);
        if values.len() != idx.len() {
            return Err(Error::DimensionMismatch { expected: idx.len(), found: values.len() });
        }
        Self::from_coeffs(d, idx.into_iter().zip(values.iter().copied()))
    }

    /// Pointwise value at a unit vector.
    pub fn eval(&self, xi: &[f64]) -> Complex64 {
        let Some(top) = self.max_degree() else {
            return Complex64::default();
        };
        let y = harmonics_upto(self.d, top, xi);
        self.coeffs.iter().map(|(k, c)| c * y[k.position()]).sum()
    }

    /// Values at every grid point.
    pub fn sample(&self, grid: &SphereGrid) -> Vec<Complex64> {
        grid.points.iter().map(|p| self.eval(p)).collect()
    }

    /// Projection of grid samples onto harmonics of degree `<= nmax`.
    pub fn analyze(grid: &SphereGrid, values: &[Complex64], nmax: usize) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::DimensionMismatch { expected: grid.len(), found: values.len() });
        }
        let mut dense = vec![Complex64::default(); basis_len(grid.d, nmax as isize)];
        for ((p, w), v) in grid.points.iter().zip(&grid.weights).zip(values) {
            let y = harmonics_upto(grid.d, nmax, p);
            for (acc, yk) in dense.iter_mut().zip(&y) {
                *acc += v * (w * yk);
            }
        }
        Self::from_dense(grid.d, nmax, &dense)
    }

    /// Pointwise product, re-expanded up to degree `nmax` on `grid`.
    pub fn product(&self, other: &Self, grid: &SphereGrid, nmax: usize) -> Result<Self> {
        if other.d != self.d || grid.d != self.d {
            return Err(Error::DimensionMismatch { expected: self.d.get(), found: other.d.get() });
        }
        let values: Vec<Complex64> = grid.points.iter().map(|p| self.eval(p) * other.eval(p)).collect();
        Self::analyze(grid, &values, nmax)
    }

    /// Drops coefficients with modulus at most `tol`.
    pub fn pruned(&self, tol: f64) -> Self {
        let coeffs = self.coeffs.iter().filter(|(_, v)| v.norm() > tol).map(|(k, v)| (*k, *v)).collect();
        SphereFunction { d: self.d, coeffs }
    }
}

#[derive(Serialize, Deserialize)]
struct SerializedSphereFunction {
    d: Dim,
    coeffs: Vec<SerializedCoeff>,
}

#[derive(Serialize, Deserialize)]
struct SerializedCoeff {
    n: usize,
    j: usize,
    re: f64,
    im: f64,
}

impl From<SphereFunction> for SerializedSphereFunction {
    fn from(f: SphereFunction) -> Self {
        let coeffs = f
            .coeffs
            .iter()
            .map(|(k, v)| SerializedCoeff { n: k.n, j: k.j, re: v.re, im: v.im })
            .collect();
        SerializedSphereFunction { d: f.d, coeffs }
    }
}

impl TryFrom<SerializedSphereFunction> for SphereFunction {
    type Error = Error;

    fn try_from(s: SerializedSphereFunction) -> Result<Self> {
        let d = s.d;
        let pairs = s
            .coeffs
            .into_iter()
            .map(|c| Ok((HarmonicIndex::new(d, c.n, c.j)?, Complex64::new(c.re, c.im))))
            .collect::<Result<Vec<_>>>()?;
        SphereFunction::from_coeffs(d, pairs)
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::quad::sphere_grid;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn norms_and_arithmetic() {
        let a = SphereFunction::basis(Dim::Three, 2, 3).unwrap();
        let b = SphereFunction::basis(Dim::Three, 1, 1).unwrap().scaled(c(2.0));
        let s = a.plus(&b).unwrap();
        assert!((s.norm_sq() - 5.0).abs() < 1e-15);
        assert_eq!(s.max_degree(), Some(2));
        assert!(s.minus(&s).unwrap().is_zero());
        assert!(SphereFunction::basis(Dim::Two, 1, 3).is_err());
    }

    #[test]
    fn dense_round_trip() {
        let f = SphereFunction::basis(Dim::Two, 3, 2).unwrap();
        let v = f.dense(4).unwrap();
        assert_eq!(v.len(), 9);
        assert_eq!(v[6], c(1.0));
        assert_eq!(SphereFunction::from_dense(Dim::Two, 4, &v).unwrap(), f);
        assert!(f.dense(2).is_err());
    }

    #[test]
    fn analysis_inverts_sampling() {
        let g = sphere_grid(Dim::Three, 16).unwrap();
        let f = SphereFunction::from_coeffs(
            Dim::Three,
            [
                (HarmonicIndex::new(Dim::Three, 0, 1).unwrap(), c(0.5)),
                (HarmonicIndex::new(Dim::Three, 3, 6).unwrap(), Complex64::new(0.0, -1.5)),
            ],
        )
        .unwrap();
        let back = SphereFunction::analyze(&g, &f.sample(&g), 5).unwrap().pruned(1e-13);
        assert_eq!(back.coeffs().len(), 2);
        assert!((back.minus(&f).unwrap().norm()) < 1e-13);
    }

    #[test]
    fn product_of_cosines() {
        // (cos t / sqrt(pi))^2 = 1/(2 pi) + cos(2t)/(2 pi)
        let g = sphere_grid(Dim::Two, 16).unwrap();
        let y11 = SphereFunction::basis(Dim::Two, 1, 1).unwrap();
        let p = y11.product(&y11, &g, 4).unwrap().pruned(1e-14);
        let y0 = HarmonicIndex::new(Dim::Two, 0, 1).unwrap();
        let y21 = HarmonicIndex::new(Dim::Two, 2, 1).unwrap();
        assert!((p.coeff(y0).re - 1.0 / (2.0 * PI).sqrt()).abs() < 1e-14);
        assert!((p.coeff(y21).re - 1.0 / (2.0 * PI.sqrt())).abs() < 1e-14);
        assert_eq!(p.coeffs().len(), 2);
    }

    #[test]
    fn serde_round_trip() {
        let f = SphereFunction::basis(Dim::Three, 2, 4).unwrap().scaled(Complex64::new(1.0, 2.0));
        let s = serde_json::to_string(&f).unwrap();
        let back: SphereFunction = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
        assert!(serde_json::from_str::<SphereFunction>(r#"{"d":2,"coeffs":[{"n":1,"j":3,"re":1,"im":0}]}"#).is_err());
    }
}
