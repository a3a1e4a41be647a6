//! One function per subcommand; each fills a [`Run`] with artifacts, checks and flags.

mod algebra;
mod bounds;
mod fields;
mod gamma;
mod kernel;
mod spectrum;

use anyhow::Result;
use herglotz_core::specfun::multiplicity;
use herglotz_core::Dim;

use crate::args::Command;
use crate::output::Run;

pub fn dispatch(command: &Command, run: &mut Run) -> Result<()> {
    match command {
        Command::Gamma(a) => gamma::run(a, run),
        Command::Spectrum(a) => spectrum::run(a, run),
        Command::Kernel(a) => kernel::run(a, run),
        Command::Degenerate(a) => bounds::degenerate(a, run),
        Command::Bounds(a) => bounds::run(a, run),
        Command::Hconv(a) => algebra::run(a, run),
        Command::Isometry(a) => fields::isometry(a, run),
        Command::Farfield(a) => fields::farfield(a, run),
    }
}

fn dim(d: usize) -> Result<Dim> {
    Ok(Dim::try_from(d)?)
}

/// Values per degree repeated by the multiplicity, sorted by decreasing modulus.
fn expand_by_multiplicity(d: Dim, per_degree: &[f64]) -> Vec<f64> {
    let mut out: Vec<f64> = per_degree
        .iter()
        .enumerate()
        .flat_map(|(n, v)| std::iter::repeat(*v).take(multiplicity(d, n)))
        .collect();
    out.sort_by(|a, b| b.abs().total_cmp(&a.abs()));
    out
}

fn rel_error(value: f64, reference: f64) -> f64 {
    let diff = (value - reference).abs();
    if reference == 0.0 {
        diff
    } else {
        diff / reference.abs()
    }
}
