use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::SphereFunction;
use crate::dim::Dim;
use crate::error::{Error, Result};
use crate::quad::SphereGrid;
use crate::specfun::{bessel_j, bessel_j_orders, gamma_fn, harmonics_upto};

/// Normalization constants of the synthesis operator and its far field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    pub c_d: f64,
    pub eps_plus: Complex64,
    pub eps_minus: Complex64,
}

impl Constants {
    pub fn new(d: Dim) -> Self {
        let phase = (d.get() as f64 - 1.0) * PI / 4.0;
        Constants {
            c_d: d.synthesis_constant(),
            eps_plus: Complex64::from_polar(1.0, phase),
            eps_minus: Complex64::from_polar(1.0, -phase),
        }
    }
}

pub(crate) fn i_pow(n: usize) -> Complex64 {
    match n % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// `sqrt(pi) J_{n + s}(r) / r^s` for `n = 0..=nmax`, `s = (d-2)/2`, including `r = 0`.
pub fn radial_factors(d: Dim, nmax: usize, r: f64) -> Result<Vec<f64>> {
    let s = d.order_shift();
    let sqrt_pi = PI.sqrt();
    if r == 0.0 {
        let mut out = vec![0.0; nmax + 1];
        out[0] = sqrt_pi / (2f64.powf(s) * gamma_fn(s + 1.0)?);
        return Ok(out);
    }
    let j = bessel_upto(s, nmax + 1, r)?;
    let scale = sqrt_pi / r.powf(s);
    Ok(j.into_iter().map(|v| v * scale).collect())
}

// J_{nu+k}(x), k < count; upward recurrence from two accurate values when it is stable.
fn bessel_upto(nu: f64, count: usize, x: f64) -> Result<Vec<f64>> {
    if x >= 25.0 && (count as f64 + nu) < 0.5 * x {
        let mut out = Vec::with_capacity(count);
        out.push(bessel_j(nu, x)?);
        if count > 1 {
            out.push(bessel_j(nu + 1.0, x)?);
        }
        for k in 2..count {
            let order = nu + (k - 1) as f64;
            let next = 2.0 * order / x * out[k - 1] - out[k - 2];
            out.push(next);
        }
        Ok(out)
    } else {
        bessel_j_orders(nu, count, x)
    }
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// `u(x) = sum c_{n,j} e_{n,j}(x)` with `e_{n,j} = sqrt(pi) i^n J_{n+s}(r) r^{-s} Y_{n,j}`.
pub fn synth(phi: &SphereFunction, x: &[f64]) -> Result<Complex64> {
    let d = phi.d();
    if x.len() != d.get() {
        return Err(Error::DimensionMismatch { expected: d.get(), found: x.len() });
    }
    let Some(top) = phi.max_degree() else {
        return Ok(Complex64::default());
    };
    let r = norm(x);
    if r == 0.0 {
        // every degree above zero vanishes at the origin
        let f0 = radial_factors(d, 0, 0.0)?[0];
        let y00 = 1.0 / d.sphere_area().sqrt();
        return Ok(phi.coeffs().iter().filter(|(k, _)| k.n == 0).map(|(_, c)| c * (f0 * y00)).sum());
    }
    let radial = radial_factors(d, top, r)?;
    let xi: Vec<f64> = x.iter().map(|v| v / r).collect();
    let y = harmonics_upto(d, top, &xi);
    Ok(phi
        .coeffs()
        .iter()
        .map(|(k, c)| c * i_pow(k.n) * (radial[k.n] * y[k.position()]))
        .sum())
}

/// Values of `I phi` at `r xi_k` for every grid point; Bessel factors are shared.
pub fn synth_on_sphere(phi: &SphereFunction, r: f64, grid: &SphereGrid) -> Result<Vec<Complex64>> {
    let d = phi.d();
    let Some(top) = phi.max_degree() else {
        return Ok(vec![Complex64::default(); grid.len()]);
    };
    let radial = radial_factors(d, top, r)?;
    let weights: Vec<(usize, Complex64)> =
        phi.coeffs().iter().map(|(k, c)| (k.position(), c * i_pow(k.n) * radial[k.n])).collect();
    Ok(grid
        .points
        .iter()
        .map(|p| {
            let y = harmonics_upto(d, top, p);
            weights.iter().map(|(pos, w)| w * y[*pos]).sum()
        })
        .collect())
}

/// `c_d sum_k w_k phi(xi_k) exp(i x . xi_k)`.
pub fn synth_integral<F>(phi: F, x: &[f64], grid: &SphereGrid) -> Result<Complex64>
where
    F: Fn(&[f64]) -> Complex64,
{
    if x.len() != grid.d.get() {
        return Err(Error::DimensionMismatch { expected: grid.d.get(), found: x.len() });
    }
    let c = grid.d.synthesis_constant();
    let mut s = Complex64::default();
    for (p, w) in grid.points.iter().zip(&grid.weights) {
        let phase: f64 = p.iter().zip(x).map(|(a, b)| a * b).sum();
        s += phi(p) * Complex64::from_polar(*w, phase);
    }
    Ok(s * c)
}

/// A Herglotz wave function `u = I phi`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HerglotzField {
    pub source: SphereFunction,
    pub d: Dim,
}

impl HerglotzField {
    pub fn new(source: SphereFunction) -> Self {
        let d = source.d();
        HerglotzField { source, d }
    }

    pub fn eval(&self, x: &[f64]) -> Result<Complex64> {
        synth(&self.source, x)
    }

    /// `|Delta_h u + u| / |u|` with the central five-point (seven-point) Laplacian.
    pub fn helmholtz_residual(&self, x: &[f64], h: f64) -> Result<f64> {
        let u0 = self.eval(x)?;
        let mut lap = Complex64::default();
        let mut y = x.to_vec();
        for i in 0..x.len() {
            y[i] = x[i] + h;
            let up = self.eval(&y)?;
            y[i] = x[i] - h;
            let down = self.eval(&y)?;
            y[i] = x[i];
            lap += (up + down - 2.0 * u0) / (h * h);
        }
        Ok((lap + u0).norm() / u0.norm())
    }

    /// CSV rows `x1,..,xd,re,im` for the given points.
    pub fn write_csv<W: Write>(&self, out: W, points: &[Vec<f64>]) -> Result<()> {
        let values: Vec<Result<Complex64>> = points.par_iter().map(|p| self.eval(p)).collect();
        let mut w = csv::Writer::from_writer(out);
        let mut header: Vec<String> = (1..=self.d.get()).map(|i| format!("x{i}")).collect();
        header.push("re".into());
        header.push("im".into());
        w.write_record(&header).map_err(io_error)?;
        for (p, v) in points.iter().zip(values) {
            let v = v?;
            let mut row: Vec<String> = p.iter().map(|c| format!("{c:.17e}")).collect();
            row.push(format!("{:.17e}", v.re));
            row.push(format!("{:.17e}", v.im));
            w.write_record(&row).map_err(io_error)?;
        }
        w.flush().map_err(|e| Error::InvalidArgument(format!("csv write failed: {e}")))?;
        Ok(())
    }
}

fn io_error(e: csv::Error) -> Error {
    Error::InvalidArgument(format!("csv write failed: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::sphere_grid;
    use crate::specfun::harmonic_indices;

    #[test]
    fn constants() {
        let c2 = Constants::new(Dim::Two);
        assert!((c2.c_d - PI.sqrt() / (2.0 * PI)).abs() < 1e-16);
        let c3 = Constants::new(Dim::Three);
        assert!((c3.c_d - PI.sqrt() / (2.0 * PI).powf(1.5)).abs() < 1e-16);
        assert!((c3.eps_plus - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        assert!((c3.eps_plus.norm() - 1.0).abs() < 1e-15 && (c2.eps_minus.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn origin_values() {
        let y0 = SphereFunction::basis(Dim::Two, 0, 1).unwrap();
        let v = synth(&y0, &[0.0, 0.0]).unwrap();
        assert!((v - Complex64::new(0.5f64.sqrt(), 0.0)).norm() < 1e-15);
        let y0 = SphereFunction::basis(Dim::Three, 0, 1).unwrap();
        let v = synth(&y0, &[0.0, 0.0, 0.0]).unwrap();
        assert!((v.re - 1.0 / (2.0 * PI).sqrt()).abs() < 1e-15);
        let y1 = SphereFunction::basis(Dim::Two, 1, 1).unwrap();
        assert_eq!(synth(&y1, &[0.0, 0.0]).unwrap(), Complex64::default());
    }

    #[test]
    fn zero_of_half_order_bessel() {
        let y0 = SphereFunction::basis(Dim::Three, 0, 1).unwrap();
        let v = synth(&y0, &[0.0, PI, 0.0]).unwrap();
        assert!(v.norm() < 1e-12);
        assert_eq!(synth(&SphereFunction::zero(Dim::Two), &[3.0, 1.0]).unwrap(), Complex64::default());
    }

    #[test]
    fn upward_recurrence_matches_direct() {
        let a = bessel_upto(0.5, 8, 60.0).unwrap();
        for (k, v) in a.iter().enumerate() {
            let want = bessel_j(0.5 + k as f64, 60.0).unwrap();
            assert!((v - want).abs() < 1e-13, "k={k}");
        }
    }

    #[test]
    fn two_path_synthesis() {
        for d in [Dim::Two, Dim::Three] {
            let grid = sphere_grid(d, 64).unwrap();
            let idx = harmonic_indices(d, 8);
            let pts: Vec<Vec<f64>> = match d {
                Dim::Two => vec![vec![0.3, -0.2], vec![5.0, 7.0], vec![-13.0, 15.0]],
                Dim::Three => vec![vec![0.3, -0.2, 0.1], vec![5.0, 7.0, -2.0], vec![-9.0, 8.0, 14.0]],
            };
            for k in idx.iter().step_by(3) {
                let phi = SphereFunction::basis(d, k.n, k.j).unwrap();
                for x in &pts {
                    let a = synth(&phi, x).unwrap();
                    let b = synth_integral(|p| phi.eval(p), x, &grid).unwrap();
                    assert!((a - b).norm() < 1e-8, "{d} {k:?} {x:?}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn sphere_sampling_matches_pointwise() {
        let g = sphere_grid(Dim::Three, 8).unwrap();
        let phi = SphereFunction::basis(Dim::Three, 2, 2)
            .unwrap()
            .plus(&SphereFunction::basis(Dim::Three, 1, 1).unwrap())
            .unwrap();
        let vals = synth_on_sphere(&phi, 3.5, &g).unwrap();
        for (p, v) in g.points.iter().zip(&vals) {
            let x: Vec<f64> = p.iter().map(|c| 3.5 * c).collect();
            assert!((synth(&phi, &x).unwrap() - v).norm() < 1e-14);
        }
    }

    #[test]
    fn solves_helmholtz() {
        for d in [Dim::Two, Dim::Three] {
            for n in 0..4 {
                let field = HerglotzField::new(SphereFunction::basis(d, n, 1).unwrap());
                let x: Vec<f64> = (0..d.get()).map(|i| 1.3 + 0.7 * i as f64).collect();
                let res = field.helmholtz_residual(&x, 1e-3).unwrap();
                assert!(res < 1e-4, "{d} n={n}: {res}");
            }
        }
    }

    #[test]
    fn csv_export() {
        let field = HerglotzField::new(SphereFunction::basis(Dim::Two, 0, 1).unwrap());
        let mut buf = Vec::new();
        field.write_csv(&mut buf, &[vec![0.0, 0.0], vec![1.0, 2.0]]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "x1,x2,re,im");
        assert_eq!(lines.len(), 3);
    }
}
