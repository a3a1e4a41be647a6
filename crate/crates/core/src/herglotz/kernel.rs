use num_complex::Complex64;

use super::field::{radial_factors, synth};
use super::SphereFunction;
use crate::dim::Dim;
use crate::error::{Error, Result};
use crate::quad::SphereGrid;
use crate::specfun::{bessel_j, gamma_fn, harmonic_indices, harmonics_upto};

/// Reproducing kernel as a function of the separation `t = |x - y|`:
/// `pi (2 pi)^{-d/2} t^{-s} J_s(t)` with `s = (d-2)/2`.
pub fn repro_kernel(d: Dim, t: f64) -> Result<f64> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("kernel separation must be finite and >= 0, got {t}")));
    }
    let s = d.order_shift();
    let profile = if t == 0.0 {
        1.0 / (2f64.powf(s) * gamma_fn(s + 1.0)?)
    } else {
        bessel_j(s, t)? / t.powf(s)
    };
    Ok(d.kernel_prefactor() * profile)
}

fn unit_or_default(x: &[f64]) -> (f64, Vec<f64>) {
    let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if r == 0.0 {
        let mut e = vec![0.0; x.len()];
        e[0] = 1.0;
        (0.0, e)
    } else {
        (r, x.iter().map(|v| v / r).collect())
    }
}

/// Partial sum `sum_{n <= nmax, j} e_{n,j}(x) conj(e_{n,j}(y))` of the kernel series.
pub fn kernel_series(d: Dim, x: &[f64], y: &[f64], nmax: usize) -> Result<f64> {
    if x.len() != d.get() || y.len() != d.get() {
        return Err(Error::DimensionMismatch { expected: d.get(), found: x.len().min(y.len()) });
    }
    let (rx, ux) = unit_or_default(x);
    let (ry, uy) = unit_or_default(y);
    let fx = radial_factors(d, nmax, rx)?;
    let fy = radial_factors(d, nmax, ry)?;
    let hx = harmonics_upto(d, nmax, &ux);
    let hy = harmonics_upto(d, nmax, &uy);
    // sum degree by degree in a fixed order so that swapping x and y is exact
    let mut total = 0.0;
    let idx = harmonic_indices(d, nmax);
    let mut k = 0;
    for n in 0..=nmax {
        let mut s = 0.0;
        while k < idx.len() && idx[k].n == n {
            s += hx[k] * hy[k];
            k += 1;
        }
        total += (fx[n] * fy[n]) * s;
    }
    Ok(total)
}

/// Residual `|<u, k_x> - u(x)|` where the pairing is the sphere integral of
/// `phi` against `conj(c_d exp(-i x . xi))`.
pub fn reproduce(phi: &SphereFunction, x: &[f64], grid: &SphereGrid) -> Result<f64> {
    if grid.d != phi.d() {
        return Err(Error::DimensionMismatch { expected: phi.d().get(), found: grid.d.get() });
    }
    let c = phi.d().synthesis_constant();
    let mut pairing = Complex64::default();
    for (p, w) in grid.points.iter().zip(&grid.weights) {
        let phase: f64 = p.iter().zip(x).map(|(a, b)| a * b).sum();
        let psi = Complex64::from_polar(c, -phase);
        pairing += phi.eval(p) * psi.conj() * *w;
    }
    Ok((pairing - synth(phi, x)?).norm())
}
