use anyhow::{bail, Result};
use herglotz_core::herglotz::{kernel_series, repro_kernel, reproduce, SphereFunction};
use herglotz_core::quad::sphere_grid;
use herglotz_core::specfun::harmonic_indices;
use herglotz_core::{Dim, Error};

use super::dim;
use crate::args::KernelArgs;
use crate::output::{Cell, Check, Run, Table};

pub const SCHEMA: &str = "herglotz.kernel/1";
pub const REPRODUCE_SCHEMA: &str = "herglotz.reproduce/1";
/// Basis densities up to this degree are checked against the reproducing identity.
pub const REPRODUCE_DEGREE: usize = 6;

fn point(d: Dim, along: f64) -> Vec<f64> {
    let mut x = vec![0.0; d.get()];
    x[0] = along;
    x
}

pub fn run(args: &KernelArgs, run: &mut Run) -> Result<()> {
    let d = dim(args.d)?;
    if args.samples < 2 || !(args.tmax > 0.0) {
        bail!(Error::InvalidArgument("kernel table needs --samples >= 2 and --tmax > 0".into()));
    }
    run.tolerance("series_abs", args.tolerance);
    run.tolerance("reproduce_abs", args.tolerance);

    // x and y placed symmetrically about the origin on the first axis
    let mut table = Table::new(vec!["t", "kernel", "series", "abs_error"]);
    let mut worst = 0.0f64;
    for i in 0..args.samples {
        let t = args.tmax * i as f64 / (args.samples - 1) as f64;
        let k = repro_kernel(d, t)?;
        let (series, err) = if 0.5 * t <= args.series_radius {
            let s = kernel_series(d, &point(d, 0.5 * t), &point(d, -0.5 * t), args.nmax)?;
            worst = worst.max((s - k).abs());
            (Cell::from(s), Cell::from((s - k).abs()))
        } else {
            (Cell::Empty, Cell::Empty)
        };
        table.push(vec![t.into(), k.into(), series, err]);
    }
    run.table("kernel", SCHEMA, &["herglotz::repro_kernel", "herglotz::kernel_series"], &table)?;
    run.check(Check::at_most("series_max_abs_error", worst, args.tolerance));

    let grid = sphere_grid(d, if d == Dim::Two { 64 } else { 32 })?;
    let x: Vec<f64> = [1.3, -0.7, 0.4][..d.get()].to_vec();
    let mut rep = Table::new(vec!["n", "j", "residual"]);
    let mut worst_rep = 0.0f64;
    for k in harmonic_indices(d, REPRODUCE_DEGREE) {
        let r = reproduce(&SphereFunction::basis(d, k.n, k.j)?, &x, &grid)?;
        worst_rep = worst_rep.max(r);
        rep.push(vec![k.n.into(), k.j.into(), r.into()]);
    }
    run.table("reproduce", REPRODUCE_SCHEMA, &["herglotz::reproduce"], &rep)?;
    run.check(Check::at_most("reproduce_max_residual", worst_rep, args.tolerance));
    Ok(())
}
