//! Flat symbol specifications: `name` or `name:key=value,key=value`.
//!
//! Radial symbols: `zero`, `power:mu=M`, `gauss:s=S`, `exp:rate=K`,
//! `indicator:rho=R`, `chirp` (`sin(r^2/4)`). Sphere symbols: `sphere:cos`,
//! `sphere:half`, `sphere:2+sin`, `sphere:const:c=C`, `sphere:phase:k=K`.

use std::collections::BTreeMap;

use herglotz_core::hconv::SphereSymbol;
use herglotz_core::radial_toeplitz::RadialSymbol;
use herglotz_core::{Dim, Error, Result};
use num_complex::Complex64;

#[derive(Debug, Clone)]
pub enum SymbolSpec {
    Radial(RadialSymbol),
    Sphere(SphereSymbol),
}

fn parse_params(body: Option<&str>, allowed: &[&str]) -> Result<BTreeMap<String, f64>> {
    let mut out = BTreeMap::new();
    let Some(body) = body else { return Ok(out) };
    for part in body.split(',').filter(|p| !p.is_empty()) {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| Error::InvalidArgument(format!("expected key=value, got '{part}'")))?;
        let key = key.trim();
        if !allowed.contains(&key) {
            return Err(Error::InvalidArgument(format!("unknown key '{key}'; allowed: {}", allowed.join(", "))));
        }
        let v: f64 = value
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("value of '{key}' is not a number: '{value}'")))?;
        if out.insert(key.to_string(), v).is_some() {
            return Err(Error::InvalidArgument(format!("key '{key}' given twice")));
        }
    }
    Ok(out)
}

fn required(params: &BTreeMap<String, f64>, key: &str, name: &str) -> Result<f64> {
    params.get(key).copied().ok_or_else(|| Error::InvalidArgument(format!("symbol '{name}' needs {key}=...")))
}

/// Parses a radial or sphere symbol; sphere symbols need the dimension.
pub fn parse_symbol(spec: &str, d: Dim) -> Result<SymbolSpec> {
    let spec = spec.trim();
    if let Some(rest) = spec.strip_prefix("sphere:") {
        let (kind, body) = match rest.split_once(':') {
            Some((k, b)) => (k, Some(b)),
            None => (rest, None),
        };
        let sym = match kind {
            "cos" => {
                parse_params(body, &[])?;
                SphereSymbol::cos_first(d)
            }
            "half" => {
                parse_params(body, &[])?;
                SphereSymbol::upper_half(d)
            }
            "2+sin" => {
                parse_params(body, &[])?;
                SphereSymbol::two_plus_sin(d)
            }
            "const" => {
                let p = parse_params(body, &["c"])?;
                SphereSymbol::constant(d, Complex64::from(required(&p, "c", "sphere:const")?))
            }
            "phase" => {
                let p = parse_params(body, &["k"])?;
                let k = required(&p, "k", "sphere:phase")?;
                if k.fract() != 0.0 || k.abs() > 1e6 {
                    return Err(Error::InvalidArgument(format!("phase k must be an integer, got {k}")));
                }
                SphereSymbol::phase(d, k as i32)
            }
            other => return Err(Error::InvalidArgument(format!("unknown sphere symbol '{other}'"))),
        };
        return Ok(SymbolSpec::Sphere(sym));
    }
    let (name, body) = match spec.split_once(':') {
        Some((n, b)) => (n, Some(b)),
        None => (spec, None),
    };
    let sym = match name {
        "zero" => {
            parse_params(body, &[])?;
            RadialSymbol::zero()
        }
        "power" => RadialSymbol::power(required(&parse_params(body, &["mu"])?, "mu", name)?)?,
        "gauss" => RadialSymbol::gaussian(required(&parse_params(body, &["s"])?, "s", name)?)?,
        "exp" => RadialSymbol::exponential(required(&parse_params(body, &["rate"])?, "rate", name)?)?,
        "indicator" => RadialSymbol::indicator(required(&parse_params(body, &["rho"])?, "rho", name)?)?,
        "chirp" => {
            parse_params(body, &[])?;
            RadialSymbol::chirp()
        }
        other => return Err(Error::InvalidArgument(format!("unknown symbol '{other}'"))),
    };
    Ok(SymbolSpec::Radial(sym))
}

pub fn parse_radial(spec: &str, d: Dim) -> Result<RadialSymbol> {
    match parse_symbol(spec, d)? {
        SymbolSpec::Radial(a) => Ok(a),
        SymbolSpec::Sphere(_) => Err(Error::InvalidArgument(format!("'{spec}' is a sphere symbol; a radial symbol is needed"))),
    }
}

pub fn parse_sphere(spec: &str, d: Dim) -> Result<SphereSymbol> {
    match parse_symbol(spec, d)? {
        SymbolSpec::Sphere(a) => Ok(a),
        SymbolSpec::Radial(_) => Err(Error::InvalidArgument(format!("'{spec}' is a radial symbol; a sphere symbol is needed"))),
    }
}

/// Harmonic index `n,j` or `n:j`.
pub fn parse_index(spec: &str) -> Result<(usize, usize)> {
    let (n, j) = spec
        .split_once([',', ':'])
        .ok_or_else(|| Error::InvalidArgument(format!("expected harmonic index n,j, got '{spec}'")))?;
    let parse = |s: &str| s.trim().parse::<usize>().map_err(|_| Error::InvalidArgument(format!("bad harmonic index '{spec}'")));
    Ok((parse(n)?, parse(j)?))
}
