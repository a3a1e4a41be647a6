use std::f64::consts::PI;

use crate::dim::Dim;
use crate::error::{Error, Result};
use crate::specfun::{bessel_j, gamma_fn, gamma_ratio};

/// Spectral sequence of `r^{-mu}`, `1 < mu < d`:
/// `pi Gamma(mu-1) Gamma(n+(d-mu)/2) / (2^{mu-1} Gamma(mu/2)^2 Gamma(n+(d+mu)/2-1))`.
pub fn closed_form_power(d: Dim, mu: f64, n: usize) -> Result<f64> {
    let dd = d.get() as f64;
    if !(mu > 1.0 && mu < dd) {
        return Err(Error::Domain(format!("power closed form needs 1 < mu < {dd}, got {mu}")));
    }
    let g = gamma_fn(mu / 2.0)?;
    let front = PI * gamma_fn(mu - 1.0)? / (2f64.powf(mu - 1.0) * g * g);
    let nf = n as f64;
    Ok(front * gamma_ratio(nf + (dd - mu) / 2.0, nf + (dd + mu) / 2.0 - 1.0)?)
}

/// `2 pi cos(shift - pi nu / 2) J_nu(2)` with `nu = n + (d-2)/2`.
pub fn closed_form_chirp_shifted(d: Dim, n: usize, shift: f64) -> Result<f64> {
    let nu = n as f64 + d.order_shift();
    Ok(2.0 * PI * (shift - 0.5 * PI * nu).cos() * bessel_j(nu, 2.0)?)
}

/// Spectral sequence of `sin(r^2/4)`: `2 pi cos(2 - pi nu / 2) J_nu(2)`.
pub fn closed_form_chirp(d: Dim, n: usize) -> Result<f64> {
    closed_form_chirp_shifted(d, n, 2.0)
}

/// Spectral sequence of the indicator of `[0, rho]` from the Lommel integral
/// `int_0^rho J_nu^2 r dr = rho^2/2 (J_nu^2 - J_{nu-1} J_{nu+1})`.
pub fn closed_form_indicator(d: Dim, rho: f64, n: usize) -> Result<f64> {
    if !(rho > 0.0) {
        return Err(Error::Domain(format!("indicator radius must be positive, got {rho}")));
    }
    let nu = n as f64 + d.order_shift();
    let j = bessel_j(nu, rho)?;
    let jp = bessel_j(nu + 1.0, rho)?;
    let jm = 2.0 * nu / rho * j - jp;
    Ok(0.5 * PI * rho * rho * (j * j - jm * jp))
}
