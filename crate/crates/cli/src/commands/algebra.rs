use anyhow::Result;
use herglotz_core::hconv::{algebra_checks, verify_factorization};
use herglotz_core::herglotz::{HerglotzField, SphereFunction};

use super::dim;
use crate::args::HconvArgs;
use crate::dsl::{parse_index, parse_sphere};
use crate::output::{Cell, Check, Run, Table};

pub const REPORT_SCHEMA: &str = "herglotz.hconv/1";
pub const FACTORIZATION_SCHEMA: &str = "herglotz.factorization/1";
/// Nodal identities hold up to rounding.
pub const NODAL_TOLERANCE: f64 = 1e-12;

pub fn run(args: &HconvArgs, run: &mut Run) -> Result<()> {
    let d = dim(args.d)?;
    let a = parse_sphere(&args.a, d)?;
    let b = parse_sphere(&args.b, d)?;
    let (un, uj) = parse_index(&args.u)?;
    let (vn, vj) = parse_index(&args.v)?;
    let u = HerglotzField::new(SphereFunction::basis(d, un, uj)?);
    let v = HerglotzField::new(SphereFunction::basis(d, vn, vj)?);

    let fact = verify_factorization(&u, &v, &args.radii)?;
    let report = algebra_checks(&a, &b, d, &args.ladder)?.with_factorization(&fact);
    run.report("hconv", REPORT_SCHEMA, &["hconv::algebra_checks", "hconv::verify_factorization"], &report)?;

    let mut table = Table::new(vec!["R", "residual", "ratio"]);
    for (k, &(r, res)) in fact.residuals.iter().enumerate() {
        let ratio = if k == 0 { Cell::Empty } else { Cell::from(fact.ratios[k - 1]) };
        table.push(vec![r.into(), res.into(), ratio]);
    }
    run.table("factorization", FACTORIZATION_SCHEMA, &["hconv::verify_factorization"], &table)?;

    run.tolerance("nodal_identities", NODAL_TOLERANCE);
    run.tolerance("factorization_residual", args.tolerance);
    run.check(Check::at_most("nodal_commutator", report.nodal_commutator(), NODAL_TOLERANCE));
    run.check(Check::at_most("nodal_product_defect", report.product_defect, NODAL_TOLERANCE));
    if let Some(idem) = report.idempotence_defect {
        run.check(Check::at_most("nodal_idempotence_defect", idem, NODAL_TOLERANCE));
    }
    if let Some(&(_, first)) = fact.residuals.first() {
        run.check(Check::at_most("factorization_residual_first", first, args.tolerance));
    }
    run.summarize("norm_ladder_monotone", report.norm_ladder_monotone())?;
    run.summarize("symbols", [&a.name, &b.name])?;
    Ok(())
}
