//! Bessel functions of the first kind, real order `nu >= 0`, real argument.
//!
//! Three regimes:
//! * power series while `x^2 <= 4 (nu + 1)` (terms decrease from the start),
//! * Hankel's asymptotic expansion for `x >= 25` once its terms reach 1e-17
//!   before they start to diverge,
//! * Miller's backward recurrence in between, normalized either by the
//!   Neumann sum `sum_k (a + 2k) Gamma(a + k) / k! J_{a+2k}(x) = (x/2)^a`
//!   or, for `x >= 25`, by the asymptotic values of `J_a` and `J_{a+1}`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::gamma::{gamma_fn, ln_gamma};
use crate::error::{Error, Result};

/// Arguments at or above this use the Hankel expansion for normalization.
pub const ASYMPTOTIC_MIN_X: f64 = 25.0;

const RESCALE_ABOVE: f64 = 1e250;
const RESCALE_BY: f64 = 1e-250;

fn check(nu: f64, x: f64) -> Result<()> {
    if !(nu >= 0.0) || !nu.is_finite() {
        return Err(Error::Domain(format!("Bessel order must be finite and >= 0, got {nu}")));
    }
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("Bessel argument must be finite and >= 0, got {x}")));
    }
    Ok(())
}

pub fn bessel_j(nu: f64, x: f64) -> Result<f64> {
    check(nu, x)?;
    if x == 0.0 {
        return Ok(if nu == 0.0 { 1.0 } else { 0.0 });
    }
    let value = if x * x <= 4.0 * (nu + 1.0) {
        series(nu, x)?
    } else if let Some(v) = hankel_candidate(nu, x) {
        v
    } else {
        let whole = nu.floor();
        let frac = nu - whole;
        let orders = miller(frac, whole as usize + 1, x);
        orders[whole as usize]
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Overflow("bessel_j"))
    }
}

/// `J_{nu + k}(x)` for `k = 0..count`.
pub fn bessel_j_orders(nu: f64, count: usize, x: f64) -> Result<Vec<f64>> {
    check(nu, x)?;
    if count == 0 {
        return Ok(Vec::new());
    }
    if x == 0.0 {
        let mut out = vec![0.0; count];
        if nu == 0.0 {
            out[0] = 1.0;
        }
        return Ok(out);
    }
    let whole = nu.floor() as usize;
    let frac = nu - nu.floor();
    let all = miller(frac, whole + count, x);
    let out = all[whole..].to_vec();
    if out.iter().all(|v| v.is_finite()) {
        Ok(out)
    } else {
        Err(Error::Overflow("bessel_j_orders"))
    }
}

fn series(nu: f64, x: f64) -> Result<f64> {
    let half = 0.5 * x;
    let lead = if nu + 1.0 < 170.0 {
        let p = half.powf(nu);
        if p > 1e-290 {
            p / gamma_fn(nu + 1.0)?
        } else {
            (nu * half.ln() - ln_gamma(nu + 1.0)?).exp()
        }
    } else {
        (nu * half.ln() - ln_gamma(nu + 1.0)?).exp()
    };
    let q = -half * half;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..500 {
        let kf = k as f64;
        term *= q / (kf * (nu + kf));
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    Ok(lead * sum)
}

// Hankel expansion: J = sqrt(2/(pi x)) (P cos chi - Q sin chi).
// Returns None when the terms start to grow before reaching 1e-17 or when
// the largest term would cost too many digits.
fn hankel(nu: f64, x: f64) -> Option<f64> {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut largest: f64 = 1.0;
    let mut converged = false;
    for k in 1..200 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        let next = term * (mu - odd * odd) / (kf * 8.0 * x);
        if kf > nu + 1.0 && next.abs() >= term.abs() {
            break;
        }
        term = next;
        largest = largest.max(term.abs());
        // a_k enters P (even k) or Q (odd k) with alternating signs
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if term.abs() < 1e-17 {
            converged = true;
            break;
        }
    }
    if !converged || largest > 1e3 {
        return None;
    }
    let (s, c) = x.sin_cos();
    let phase = (0.5 * nu + 0.25) * PI;
    let (sp, cp) = phase.sin_cos();
    let cos_chi = c * cp + s * sp;
    let sin_chi = s * cp - c * sp;
    Some((2.0 / (PI * x)).sqrt() * (p * cos_chi - q * sin_chi))
}

fn hankel_candidate(nu: f64, x: f64) -> Option<f64> {
    if x >= ASYMPTOTIC_MIN_X && x >= 0.5 * nu * nu {
        hankel(nu, x)
    } else {
        None
    }
}

// J_{a+k}(x), k = 0..count, with 0 <= a < 1 and x > 0.
fn miller(a: f64, count: usize, x: f64) -> Vec<f64> {
    let top = count - 1;
    let m = (top as f64).max(x);
    let start = (m + (200.0 * m.max(1.0)).sqrt() + 20.0) as usize;
    let start = start.max(top + 2);

    let mut f = vec![0.0; start + 2];
    f[start] = 1e-280;
    for k in (1..=start).rev() {
        let prev = 2.0 * (a + k as f64) / x * f[k] - f[k + 1];
        f[k - 1] = prev;
        if prev.abs() > RESCALE_ABOVE {
            for v in f[k - 1..].iter_mut() {
                *v *= RESCALE_BY;
            }
        }
    }

    let scale = if x >= ASYMPTOTIC_MIN_X {
        let ja = hankel(a, x).expect("Hankel expansion converges for order < 2 and x >= 25");
        let ja1 = hankel(a + 1.0, x).expect("Hankel expansion converges for order < 2 and x >= 25");
        // work with normalized copies so the squares neither overflow nor underflow
        let n = f[0].abs().max(f[1].abs());
        let (u0, u1) = (f[0] / n, f[1] / n);
        (ja * u0 + ja1 * u1) / (u0 * u0 + u1 * u1) / n
    } else {
        // Neumann sum with c_0 = Gamma(a+1), c_k = (a + 2k) Gamma(a+k)/k!
        let g1 = gamma_fn(a + 1.0).expect("a + 1 lies in [1, 2)");
        let mut sum = g1 * f[0];
        let mut g = g1;
        let mut k = 1usize;
        while 2 * k <= start {
            let kf = k as f64;
            sum += (a + 2.0 * kf) * g * f[2 * k];
            g *= (a + kf) / (kf + 1.0);
            k += 1;
        }
        (0.5 * x).powf(a) / sum
    };
    f.truncate(count);
    for v in f.iter_mut() {
        *v *= scale;
    }
    f
}

/// `J_nu(z) / (z/2)^nu` for complex `z`: the entire part of the power series.
pub fn bessel_j_reduced(nu: f64, z: Complex64) -> Result<Complex64> {
    if !(nu >= 0.0) || !nu.is_finite() {
        return Err(Error::Domain(format!("Bessel order must be finite and >= 0, got {nu}")));
    }
    if !(nu + 1.0 < 170.0) {
        return Err(Error::Overflow("bessel_j_reduced"));
    }
    let q = -0.25 * z * z;
    let mut term = Complex64::new(1.0 / gamma_fn(nu + 1.0)?, 0.0);
    let mut sum = term;
    let reach = q.norm();
    for k in 1..2000 {
        let kf = k as f64;
        term *= q / (kf * (nu + kf));
        sum += term;
        if kf > reach && term.norm() < 1e-17 * sum.norm() {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergence("bessel_j_reduced series".into()))
}
