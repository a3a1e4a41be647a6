use anyhow::Result;
use herglotz_core::herglotz::{b_star_average, far_field_residual, SphereFunction};
use herglotz_core::quad::{sphere_grid, SphereGrid};
use herglotz_core::Dim;

use super::dim;
use crate::args::{FarfieldArgs, IsometryArgs};
use crate::dsl::parse_index;
use crate::output::{Cell, Check, Run, Table};

pub const ISOMETRY_SCHEMA: &str = "herglotz.isometry/1";
pub const FARFIELD_SCHEMA: &str = "herglotz.farfield/1";

fn densities(d: Dim, specs: &[String]) -> Result<Vec<(usize, usize, SphereFunction)>> {
    specs
        .iter()
        .map(|s| {
            let (n, j) = parse_index(s)?;
            Ok((n, j, SphereFunction::basis(d, n, j)?))
        })
        .collect()
}

/// Resolution integrating `|I phi|^2` exactly on each sphere for the given degree.
fn grid_for(d: Dim, degree: usize, requested: Option<usize>) -> Result<SphereGrid> {
    let res = requested.unwrap_or(match d {
        Dim::Two => (4 * degree + 8).max(16),
        Dim::Three => (2 * degree + 6).max(8),
    });
    Ok(sphere_grid(d, res)?)
}

pub fn isometry(args: &IsometryArgs, run: &mut Run) -> Result<()> {
    let d = dim(args.d)?;
    let fields = densities(d, &args.fields)?;
    let degree = fields.iter().map(|f| f.0).max().unwrap_or(0);
    let grid = grid_for(d, degree, args.grid)?;
    run.tolerance("deviation_first_radius", args.tolerance);
    run.tolerance("deviation_ratio", args.ratio);

    let mut table = Table::new(vec!["n", "j", "R", "average", "deviation", "ratio"]);
    let (mut worst_first, mut worst_ratio) = (0.0f64, 0.0f64);
    for (n, j, phi) in &fields {
        let mut prev: Option<f64> = None;
        for &r in &args.radii {
            let avg = b_star_average(phi, r, &grid)?;
            let dev = (avg - 1.0).abs();
            let ratio = prev.map(|p| dev / p);
            match ratio {
                None => worst_first = worst_first.max(dev),
                Some(q) => worst_ratio = worst_ratio.max(q),
            }
            table.push(vec![(*n).into(), (*j).into(), r.into(), avg.into(), dev.into(), ratio.into()]);
            prev = Some(dev);
        }
    }
    run.table("isometry", ISOMETRY_SCHEMA, &["herglotz::b_star_average"], &table)?;
    run.summarize("grid_resolution", grid.resolution)?;
    run.check(Check::at_most("deviation_first_radius", worst_first, args.tolerance));
    if args.radii.len() > 1 {
        run.check(Check::at_most("deviation_ratio", worst_ratio, args.ratio));
    }
    Ok(())
}

pub fn farfield(args: &FarfieldArgs, run: &mut Run) -> Result<()> {
    let d = dim(args.d)?;
    let fields = densities(d, &args.fields)?;
    let degree = fields.iter().map(|f| f.0).max().unwrap_or(0);
    let grid = grid_for(d, degree, args.grid)?;
    run.tolerance("residual_ratio", args.ratio);

    let mut table = Table::new(vec!["n", "j", "R", "residual", "ratio"]);
    let mut worst = 0.0f64;
    for (n, j, phi) in &fields {
        let mut prev: Option<f64> = None;
        for &r in &args.radii {
            let res = far_field_residual(phi, r, &grid)?;
            // exact far fields have no remainder to shrink
            let ratio = prev.filter(|p| *p > 1e-12).map(|p| res / p);
            if let Some(q) = ratio {
                worst = worst.max(q);
            }
            table.push(vec![(*n).into(), (*j).into(), r.into(), res.into(), ratio.map_or(Cell::Empty, Cell::from)]);
            prev = Some(res);
        }
    }
    run.table("farfield", FARFIELD_SCHEMA, &["herglotz::far_field_residual"], &table)?;
    run.summarize("grid_resolution", grid.resolution)?;
    if args.radii.len() > 1 {
        run.check(Check::at_most("residual_ratio", worst, args.ratio));
    }
    Ok(())
}
