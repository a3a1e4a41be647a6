use anyhow::{bail, Result};
use herglotz_core::quad::{sphere_grid, TailPolicy};
use herglotz_core::radial_toeplitz::gamma_sequence;
use herglotz_core::sphere_op::{build_nodal, circle_eigs, eigen_hermitian, SymbolTransform};
use herglotz_core::Dim;

use super::{dim, expand_by_multiplicity, rel_error};
use crate::args::SpectrumArgs;
use crate::dsl::parse_radial;
use crate::output::{Check, Run, Table};

pub const SCHEMA: &str = "herglotz.spectrum/1";

pub fn run(args: &SpectrumArgs, run: &mut Run) -> Result<()> {
    let d = dim(args.d)?;
    let a = parse_radial(&args.symbol, d)?;
    run.tolerance("spectrum_relative_gap", args.tolerance);
    let seq = gamma_sequence(&a, d, args.nmax, &TailPolicy::default())?;
    let diag = expand_by_multiplicity(d, &seq.gammas);

    let t = SymbolTransform::from_symbol(&a, d)?;
    let grid = sphere_grid(d, args.grid)?;
    let m = build_nodal(&t, &grid)?;
    let nodal = eigen_hermitian(&m, false)?.values;
    let circle = match d {
        Dim::Two => Some(expand_by_multiplicity(d, &circle_eigs(&t, args.nmax)?)),
        Dim::Three => None,
    };
    if args.top > diag.len().min(nodal.len()) {
        bail!(herglotz_core::Error::InvalidArgument(format!(
            "top={} exceeds the {} diagonal and {} nodal eigenvalues; raise --nmax or --grid",
            args.top,
            diag.len(),
            nodal.len()
        )));
    }

    let rows = diag.len().min(nodal.len());
    let mut table = Table::new(vec!["k", "diag", "nodal", "circle", "gap_nodal", "gap_circle"]);
    let (mut worst_nodal, mut worst_circle) = (0.0f64, 0.0f64);
    for k in 0..rows {
        let c = circle.as_ref().map(|c| c[k]);
        let gn = rel_error(nodal[k], diag[k]);
        let gc = c.map(|c| rel_error(c, diag[k]));
        if k < args.top {
            worst_nodal = worst_nodal.max(gn);
            worst_circle = worst_circle.max(gc.unwrap_or(0.0));
        }
        table.push(vec![k.into(), diag[k].into(), nodal[k].into(), c.into(), gn.into(), gc.into()]);
    }
    run.table(
        "spectrum",
        SCHEMA,
        &["radial_toeplitz::gamma_sequence", "sphere_op::build_nodal", "sphere_op::eigen_hermitian", "sphere_op::circle_eigs"],
        &table,
    )?;
    run.summarize("symbol", a.describe())?;
    run.summarize("nodal_warnings", &m.warnings)?;
    run.check(Check::at_most("nodal_vs_diag_top", worst_nodal, args.tolerance));
    if circle.is_some() {
        run.check(Check::at_most("circle_vs_diag_top", worst_circle, args.tolerance));
    }
    if !seq.all_converged() {
        run.flag("non_convergence: spectral sequence");
    }
    Ok(())
}
