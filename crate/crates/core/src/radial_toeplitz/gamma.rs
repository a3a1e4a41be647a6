use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::symbol::{DecayTag, RadialSymbol, SymbolKind};
use crate::dim::Dim;
use crate::error::{Error, Result};
use crate::quad::{algebraic_tail, dyadic_origin, integrate_semiaxis, levin_limit, panel_rule, TailPolicy};
use crate::specfun::{bessel_j, bessel_j_orders, bessel_j_reduced};

/// Eigenvalues `gamma_a(n)` of a radial-symbol Toeplitz operator, one per degree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralSequence {
    pub d: Dim,
    pub gammas: Vec<f64>,
    pub error_bounds: Vec<f64>,
    /// Per-degree convergence flag of the quadrature.
    pub converged: Vec<bool>,
}

impl SpectralSequence {
    /// Sequence with exact values.
    pub fn from_values(d: Dim, gammas: Vec<f64>) -> Result<Self> {
        if gammas.is_empty() || gammas.iter().any(|g| !g.is_finite()) {
            return Err(Error::InvalidArgument("spectral values must be finite and non-empty".into()));
        }
        let n = gammas.len();
        Ok(SpectralSequence { d, gammas, error_bounds: vec![0.0; n], converged: vec![true; n] })
    }

    pub fn nmax(&self) -> usize {
        self.gammas.len() - 1
    }

    pub fn sup_abs(&self) -> f64 {
        self.gammas.iter().fold(0.0, |m, g| m.max(g.abs()))
    }

    pub fn all_converged(&self) -> bool {
        self.converged.iter().all(|c| *c)
    }

    /// CSV with columns `n, gamma, error_bound`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::InvalidArgument(format!("csv output failed: {e}"));
        w.write_record(["n", "gamma", "error_bound"]).map_err(io)?;
        for (n, (g, e)) in self.gammas.iter().zip(&self.error_bounds).enumerate() {
            w.write_record([n.to_string(), format!("{g:.17e}"), format!("{e:.3e}")]).map_err(io)?;
        }
        w.flush().map_err(|e| Error::InvalidArgument(format!("csv output failed: {e}")))?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Route {
    Compact(f64),
    Fast,
    Algebraic(f64),
    Generic,
}

fn route_of(tag: DecayTag, support: Option<f64>) -> Result<Route> {
    Ok(match tag {
        DecayTag::Compact => Route::Compact(support.unwrap_or(0.0)),
        DecayTag::L1 => Route::Fast,
        DecayTag::Power { lambda } => {
            if !(lambda < -1.0) {
                return Err(Error::Divergent(format!(
                    "symbol decays like r^{lambda}; the spectral integral diverges at infinity"
                )));
            }
            Route::Algebraic(-lambda)
        }
        DecayTag::Oscillatory | DecayTag::Other => Route::Generic,
    })
}

fn join(a: Route, b: Route) -> Route {
    use Route::*;
    match (a, b) {
        (Generic, _) | (_, Generic) => Generic,
        (Algebraic(p), Algebraic(q)) => Algebraic(p.min(q)),
        (Algebraic(p), _) | (_, Algebraic(p)) => Algebraic(p),
        (Fast, _) | (_, Fast) => Fast,
        (Compact(s), Compact(t)) => Compact(s.max(t)),
    }
}

struct Estimate {
    value: Vec<f64>,
    error: Vec<f64>,
    converged: Vec<bool>,
}

impl Estimate {
    fn zeros(len: usize) -> Self {
        Estimate { value: vec![0.0; len], error: vec![0.0; len], converged: vec![true; len] }
    }

    fn add_scaled(&mut self, c: f64, other: &Estimate) {
        for i in 0..self.value.len() {
            self.value[i] += c * other.value[i];
            self.error[i] += c.abs() * other.error[i];
            self.converged[i] &= other.converged[i];
        }
    }
}

/// `gamma_a(n) = pi int_0^inf a(r) J_{n+(d-2)/2}(r)^2 r dr` for `n = 0..=nmax`.
///
/// Chirp and oscillatory components are integrated one degree at a time and
/// compactly supported ones up to their own support; all other components
/// share one set of nodes across degrees. Power-law
/// tails are split into the smooth part of `r J^2`, integrated by an
/// algebraic substitution, and an oscillating remainder summed in
/// half-period blocks with sequence extrapolation.
pub fn gamma_sequence(a: &RadialSymbol, d: Dim, nmax: usize, policy: &TailPolicy) -> Result<SpectralSequence> {
    policy.validate()?;
    let len = nmax + 1;
    check_origin(a, d)?;
    let mut total = Estimate::zeros(len);
    let mut shared: Vec<(f64, RadialSymbol)> = Vec::new();
    let mut route: Option<Route> = None;
    for (c, leaf) in a.leaves() {
        if c == 0.0 || matches!(leaf.kind(), SymbolKind::Zero) {
            continue;
        }
        match leaf.kind() {
            SymbolKind::Chirp => total.add_scaled(c, &chirp_sequence(d, nmax)?),
            _ => {
                let r = route_of(leaf.decay_tag(), leaf.support_radius())?;
                if r == Route::Generic {
                    total.add_scaled(c, &generic_sequence(&leaf, d, nmax, policy)?);
                } else if let Route::Compact(support) = r {
                    // separately, so that panels end at the support edge
                    let f = |r: f64| leaf.eval(r);
                    total.add_scaled(c, &compact_sequence(&f, d, nmax, support)?);
                } else {
                    route = Some(route.map_or(r, |q| join(q, r)));
                    shared.push((c, leaf));
                }
            }
        }
    }
    if let Some(route) = route {
        let f = move |r: f64| shared.iter().map(|(c, s)| c * s.eval(r)).sum::<f64>();
        let est = match route {
            Route::Compact(support) => compact_sequence(&f, d, nmax, support)?,
            Route::Fast => fast_sequence(&f, d, nmax, policy)?,
            Route::Algebraic(p) => algebraic_sequence(&f, d, nmax, p, policy)?,
            Route::Generic => unreachable!("generic leaves are integrated separately"),
        };
        total.add_scaled(1.0, &est);
    }
    for i in 0..len {
        if !total.value[i].is_finite() {
            return Err(Error::NonConvergence(format!("gamma({i}) is not finite")));
        }
        total.converged[i] &= total.error[i] <= policy.tolerance * total.value[i].abs() || total.error[i] < 1e-300;
    }
    Ok(SpectralSequence { d, gammas: total.value, error_bounds: total.error, converged: total.converged })
}

// Power singularities at the origin must be integrable against r^{2 nu + 1}.
fn check_origin(a: &RadialSymbol, d: Dim) -> Result<()> {
    for (c, leaf) in a.leaves() {
        if let SymbolKind::Power { mu } = leaf.kind() {
            if c != 0.0 && *mu >= d.get() as f64 {
                return Err(Error::Divergent(format!(
                    "r^-{mu} is not integrable at the origin in dimension {d}; need mu < {d}"
                )));
            }
        }
    }
    Ok(())
}

const ORIGIN_CELL: f64 = 0.25 * PI;

fn origin_cells<F: Fn(f64) -> f64 + Sync>(f: &F, d: Dim, nmax: usize, h: f64) -> Result<Estimate> {
    let s = d.order_shift();
    let parts: Vec<Result<(f64, f64, bool)>> = (0..=nmax)
        .into_par_iter()
        .map(|n| {
            let nu = n as f64 + s;
            let g = |r: f64| {
                let j = bessel_j(nu, r).unwrap_or(f64::NAN);
                PI * f(r) * r * j * j
            };
            let e = dyadic_origin(&g, h)?;
            Ok((e.value, e.error_bound, e.converged))
        })
        .collect();
    let mut est = Estimate::zeros(nmax + 1);
    for (n, p) in parts.into_iter().enumerate() {
        let (v, e, c) = p?;
        est.value[n] = v;
        est.error[n] = e;
        est.converged[n] = c;
    }
    Ok(est)
}

/// Nodes and weights of Gauss–Legendre panels covering `[lo, hi]`.
fn panel_nodes(lo: f64, hi: f64, max_len: f64) -> Vec<(f64, f64)> {
    if hi <= lo {
        return Vec::new();
    }
    let count = ((hi - lo) / max_len).ceil().max(1.0) as usize;
    let h = (hi - lo) / count as f64;
    let rule = panel_rule();
    (0..count)
        .flat_map(|i| {
            let a = lo + i as f64 * h;
            let b = if i + 1 == count { hi } else { a + h };
            rule.mapped(a, b).collect::<Vec<_>>()
        })
        .collect()
}

const CHUNK: usize = 48;

/// `sum_k w_k g(n, r_k, J_{n+s}(r_k))` for all `n`, with per-degree sums of
/// absolute values as a rounding scale.
fn node_sums<G>(nodes: &[(f64, f64)], d: Dim, nmax: usize, g: &G) -> Result<(Vec<f64>, Vec<f64>)>
where
    G: Fn(usize, f64, f64) -> f64 + Sync,
{
    let len = nmax + 1;
    let s = d.order_shift();
    let chunks: Vec<Result<(Vec<f64>, Vec<f64>)>> = nodes
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut sum = vec![0.0; len];
            let mut abs = vec![0.0; len];
            for &(r, w) in chunk {
                let js = bessel_j_orders(s, len, r)?;
                for n in 0..len {
                    let v = w * g(n, r, js[n]);
                    sum[n] += v;
                    abs[n] += v.abs();
                }
            }
            Ok((sum, abs))
        })
        .collect();
    let mut sum = vec![0.0; len];
    let mut abs = vec![0.0; len];
    for c in chunks {
        let (s, a) = c?;
        for n in 0..len {
            sum[n] += s[n];
            abs[n] += a[n];
        }
    }
    Ok((sum, abs))
}

fn head<F: Fn(f64) -> f64 + Sync>(f: &F, d: Dim, nmax: usize, top: f64, panel: f64) -> Result<Estimate> {
    let h = ORIGIN_CELL.min(top);
    let mut est = origin_cells(f, d, nmax, h)?;
    let nodes = panel_nodes(h, top, panel);
    let (sum, abs) = node_sums(&nodes, d, nmax, &|_, r, j| PI * f(r) * r * j * j)?;
    for n in 0..=nmax {
        est.value[n] += sum[n];
        est.error[n] += 1e-14 * abs[n];
    }
    Ok(est)
}

fn compact_sequence<F: Fn(f64) -> f64 + Sync>(f: &F, d: Dim, nmax: usize, support: f64) -> Result<Estimate> {
    if support <= 0.0 {
        return Ok(Estimate::zeros(nmax + 1));
    }
    head(f, d, nmax, support, 0.25 * PI)
}

fn fast_sequence<F: Fn(f64) -> f64 + Sync>(f: &F, d: Dim, nmax: usize, policy: &TailPolicy) -> Result<Estimate> {
    let block = 0.5 * policy.period;
    let panel = 0.5 * block;
    let nu_max = nmax as f64 + d.order_shift();
    let mut est = head(f, d, nmax, ORIGIN_CELL, panel)?;
    let mut lo = ORIGIN_CELL;
    let mut quiet = 0usize;
    let mut last = vec![0.0; nmax + 1];
    while lo < policy.r_max {
        let nodes = panel_nodes(lo, lo + block, panel);
        let (sum, abs) = node_sums(&nodes, d, nmax, &|_, r, j| PI * f(r) * r * j * j)?;
        let mut all_small = true;
        for n in 0..=nmax {
            est.value[n] += sum[n];
            est.error[n] += 1e-14 * abs[n];
            if !(sum[n] == 0.0 || sum[n].abs() <= 1e-17 * est.value[n].abs()) {
                all_small = false;
            }
        }
        last = sum;
        lo += block;
        quiet = if all_small { quiet + 1 } else { 0 };
        if quiet >= 4 && lo > nu_max + 10.0 {
            for n in 0..=nmax {
                est.error[n] += last[n].abs();
            }
            return Ok(est);
        }
    }
    for n in 0..=nmax {
        est.error[n] += 4.0 * last[n].abs();
        est.converged[n] = false;
    }
    Ok(est)
}

/// Non-oscillating part `(r/2)(J_nu^2 + Y_nu^2)` of `r J_nu(r)^2`, from its
/// asymptotic series; accurate for `r >= max(20, 2 nu)`.
fn smooth_part(nu: f64, r: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let x2 = 4.0 * r * r;
    let mut t = 1.0;
    let mut sum = 1.0;
    for k in 1..200 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        let next = t * odd / (2.0 * kf) * (mu - odd * odd) / x2;
        if next == 0.0 || next.abs() > t.abs() {
            break;
        }
        t = next;
        sum += t;
        if t.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum / PI
}

/// Asymptotic phase `theta_nu(r)` with `J_nu = M cos(theta)`, `Y_nu = M sin(theta)`.
fn hankel_phase(nu: f64, r: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let r2 = r * r;
    r - (0.5 * nu + 0.25) * PI
        + (mu - 1.0) / (8.0 * r)
        + (mu - 1.0) * (mu - 25.0) / (384.0 * r * r2)
        + (mu - 1.0) * (mu * mu - 114.0 * mu + 1073.0) / (5120.0 * r * r2 * r2)
}

/// First `count` radii `>= start` where `cos(2 theta_nu)` vanishes.
fn phase_edges(nu: f64, start: f64, count: usize) -> Vec<f64> {
    let offset = 0.25 * PI;
    let k0 = ((2.0 * (hankel_phase(nu, start) - offset)) / PI).ceil();
    (0..count)
        .map(|i| {
            let target = offset + 0.5 * PI * (k0 + i as f64);
            let mut r = start + (target - hankel_phase(nu, start));
            for _ in 0..50 {
                let h = 1e-6 * r;
                let slope = (hankel_phase(nu, r + h) - hankel_phase(nu, r - h)) / (2.0 * h);
                let step = (hankel_phase(nu, r) - target) / slope;
                r -= step;
                if step.abs() <= 1e-14 * r {
                    break;
                }
            }
            r.max(start)
        })
        .collect()
}

fn panel_integral<G: Fn(f64) -> f64>(g: &G, lo: f64, hi: f64, panel: f64) -> f64 {
    panel_nodes(lo, hi, panel).into_iter().map(|(r, w)| w * g(r)).sum()
}

fn algebraic_sequence<F: Fn(f64) -> f64 + Sync>(
    f: &F,
    d: Dim,
    nmax: usize,
    p: f64,
    policy: &TailPolicy,
) -> Result<Estimate> {
    let s = d.order_shift();
    let block = 0.5 * policy.period;
    let panel = 0.5 * block;
    let nu_max = nmax as f64 + s;
    let start = (20f64.max(2.0 * nu_max) / block).ceil() * block;
    let mut est = head(f, d, nmax, start, panel)?;

    // oscillating remainder a (r J^2 - m) on blocks between zeros of cos(2 theta_nu)
    let tails: Vec<Result<(f64, f64, bool)>> = (0..=nmax)
        .into_par_iter()
        .map(|n| {
            let nu = n as f64 + s;
            let g = |r: f64| {
                let j = bessel_j(nu, r).unwrap_or(f64::NAN);
                PI * f(r) * (r * j * j - smooth_part(nu, r))
            };
            let edges = phase_edges(nu, start, policy.blocks + 1);
            let lead = panel_integral(&g, start, edges[0], panel);
            let terms: Vec<f64> = edges.windows(2).map(|w| panel_integral(&g, w[0], w[1], panel)).collect();
            let osc = levin_limit(&terms);
            let smooth = |r: f64| PI * f(r) * smooth_part(nu, r);
            let alg = algebraic_tail(&smooth, start, p)?;
            Ok((lead + osc.value + alg.value, osc.error_bound + alg.error_bound, osc.converged && alg.converged))
        })
        .collect();
    for (n, t) in tails.into_iter().enumerate() {
        let (v, e, c) = t?;
        est.value[n] += v;
        est.error[n] += e;
        est.converged[n] &= c;
    }
    Ok(est)
}

fn generic_sequence(a: &RadialSymbol, d: Dim, nmax: usize, policy: &TailPolicy) -> Result<Estimate> {
    let s = d.order_shift();
    let parts: Vec<Result<(f64, f64, bool)>> = (0..=nmax)
        .into_par_iter()
        .map(|n| {
            let nu = n as f64 + s;
            let g = |r: f64| {
                let j = bessel_j(nu, r).unwrap_or(f64::NAN);
                PI * a.eval(r) * r * j * j
            };
            let e = integrate_semiaxis(g, policy)?;
            Ok((e.value, e.error_bound, e.converged))
        })
        .collect();
    let mut est = Estimate::zeros(nmax + 1);
    for (n, p) in parts.into_iter().enumerate() {
        let (v, e, c) = p?;
        est.value[n] = v;
        est.error[n] = e;
        est.converged[n] = c;
    }
    Ok(est)
}

/// Largest order accepted by the chirp contour rule.
pub const CHIRP_MAX_ORDER: f64 = 150.0;

/// `sin(r^2/4)` via the rotation `r = rho e^{i pi/4}`, which turns the
/// oscillating integral into
/// `pi Re int_0^inf exp(-rho^2/4) rho J_nu(rho e^{i pi/4})^2 d rho`.
fn chirp_sequence(d: Dim, nmax: usize) -> Result<Estimate> {
    let s = d.order_shift();
    if nmax as f64 + s > CHIRP_MAX_ORDER {
        return Err(Error::InvalidArgument(format!(
            "chirp spectral values are computed for orders up to {CHIRP_MAX_ORDER}"
        )));
    }
    let rot = Complex64::from_polar(1.0, 0.25 * PI);
    let parts: Vec<Result<(f64, f64)>> = (0..=nmax)
        .into_par_iter()
        .map(|n| {
            let nu = n as f64 + s;
            let phase = Complex64::from_polar(1.0, 0.5 * PI * nu);
            let top = 2.0 * nu.sqrt() + 30.0;
            let nodes = panel_nodes(0.0, top, 0.5);
            let mut sum = 0.0;
            let mut abs = 0.0;
            for (rho, w) in nodes {
                let red = bessel_j_reduced(nu, rho * rot)?;
                let mag = red.norm();
                if mag == 0.0 {
                    continue;
                }
                let log = -0.25 * rho * rho + 2.0 * nu * (0.5 * rho).ln() + 2.0 * mag.ln();
                let val = log.exp() * rho * (phase * (red / mag).powu(2)).re;
                sum += w * val;
                abs += w * val.abs();
            }
            Ok((PI * sum, PI * (1e-14 * abs + 1e-300)))
        })
        .collect();
    let mut est = Estimate::zeros(nmax + 1);
    for (n, p) in parts.into_iter().enumerate() {
        let (v, e) = p?;
        est.value[n] = v;
        est.error[n] = e;
    }
    Ok(est)
}
