use anyhow::Result;
use herglotz_core::quad::TailPolicy;
use herglotz_core::radial_toeplitz::{
    closed_form_chirp, closed_form_chirp_shifted, closed_form_indicator, closed_form_power, gamma_sequence, ClosedFormTag,
};
use herglotz_core::specfun::multiplicity;
use herglotz_core::{Dim, Error};

use super::{dim, rel_error};
use crate::args::GammaArgs;
use crate::dsl::parse_radial;
use crate::output::{Check, Run, Table};

pub const SCHEMA: &str = "herglotz.gamma/1";
/// Relative agreement expected between quadrature and a closed form.
pub const ORACLE_TOLERANCE: f64 = 1e-6;
/// Phase of the alternative chirp formula reported next to the verified one.
pub const CHIRP_ALT_SHIFT: f64 = 1.0;

fn oracle(tag: Option<ClosedFormTag>, d: Dim, n: usize) -> Result<(Option<f64>, Option<f64>)> {
    Ok(match tag {
        Some(ClosedFormTag::Power { mu }) => match closed_form_power(d, mu, n) {
            Ok(v) => (Some(v), None),
            Err(Error::Domain(_)) => (None, None),
            Err(e) => return Err(e.into()),
        },
        Some(ClosedFormTag::Indicator { rho }) => (Some(closed_form_indicator(d, rho, n)?), None),
        Some(ClosedFormTag::Chirp) => (Some(closed_form_chirp(d, n)?), Some(closed_form_chirp_shifted(d, n, CHIRP_ALT_SHIFT)?)),
        None => (None, None),
    })
}

pub fn run(args: &GammaArgs, run: &mut Run) -> Result<()> {
    let d = dim(args.d)?;
    let a = parse_radial(&args.symbol, d)?;
    let policy = TailPolicy { tolerance: args.tolerance, ..TailPolicy::default() };
    run.tolerance("tail_relative", args.tolerance);
    run.tolerance("oracle_relative", ORACLE_TOLERANCE);
    let seq = gamma_sequence(&a, d, args.nmax, &policy)?;
    let tag = a.closed_form_tag();

    let mut table = Table::new(vec![
        "n",
        "multiplicity",
        "gamma",
        "error_bound",
        "converged",
        "oracle",
        "rel_error",
        "oracle_alt",
        "rel_error_alt",
    ]);
    let mut worst: Option<f64> = None;
    let mut worst_alt: Option<f64> = None;
    for n in 0..=args.nmax {
        let g = seq.gammas[n];
        let (o, alt) = oracle(tag, d, n)?;
        let err = o.map(|o| rel_error(g, o));
        let err_alt = alt.map(|o| rel_error(g, o));
        if let Some(e) = err {
            worst = Some(worst.map_or(e, |w: f64| w.max(e)));
        }
        if let Some(e) = err_alt {
            worst_alt = Some(worst_alt.map_or(e, |w: f64| w.max(e)));
        }
        table.push(vec![
            n.into(),
            multiplicity(d, n).into(),
            g.into(),
            seq.error_bounds[n].into(),
            seq.converged[n].into(),
            o.into(),
            err.into(),
            alt.into(),
            err_alt.into(),
        ]);
    }
    run.table("gamma", SCHEMA, &["radial_toeplitz::gamma_sequence", "radial_toeplitz::closed_form_*"], &table)?;

    run.summarize("symbol", a.describe())?;
    run.summarize("gamma_0", seq.gammas[0])?;
    run.summarize("max_rel_error", worst)?;
    if let Some(w) = worst {
        run.check(Check::at_most("oracle_max_rel_error", w, ORACLE_TOLERANCE));
    }
    if let Some(w) = worst_alt {
        run.summarize("max_rel_error_alt", w)?;
        run.summarize("alt_phase_shift", CHIRP_ALT_SHIFT)?;
        run.check(Check::at_most("oracle_alt_max_rel_error", w, ORACLE_TOLERANCE));
    }
    let stalled: Vec<usize> = (0..=args.nmax).filter(|&n| !seq.converged[n]).collect();
    if !stalled.is_empty() {
        run.flag(format!("non_convergence: degrees {stalled:?}"));
    }
    Ok(())
}
