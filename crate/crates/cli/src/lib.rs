//! Command-line front end: symbol DSL, subcommands and artifact output.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod commands;
pub mod dsl;
pub mod output;

use anyhow::Result;
use serde_json::Value;

use args::{Cli, Command};
use output::{Run, ERROR_SCHEMA};

pub fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Gamma(_) => "gamma",
        Command::Spectrum(_) => "spectrum",
        Command::Kernel(_) => "kernel",
        Command::Degenerate(_) => "degenerate",
        Command::Bounds(_) => "bounds",
        Command::Hconv(_) => "hconv",
        Command::Isometry(_) => "isometry",
        Command::Farfield(_) => "farfield",
    }
}

/// Runs one command and writes its artifacts and manifest.
pub fn run(cli: &Cli) -> Result<Run> {
    let mut config = serde_json::to_value(&cli.command)?;
    // the output directory is left out so that reruns elsewhere stay byte-identical
    config["format"] = serde_json::to_value(cli.format)?;
    let mut run = Run::new(&cli.out, cli.format, command_name(&cli.command), config)?;
    commands::dispatch(&cli.command, &mut run)?;
    run.finish()?;
    Ok(run)
}

/// Machine-readable error record printed on stderr.
pub fn error_json(err: &anyhow::Error) -> Value {
    let kind = err.downcast_ref::<herglotz_core::Error>().map_or("runtime", herglotz_core::Error::kind);
    serde_json::json!({ "schema": ERROR_SCHEMA, "kind": kind, "message": format!("{err:#}") })
}

/// Error record for a run whose modules raised flags.
pub fn flags_json(run: &Run) -> Value {
    serde_json::json!({
        "schema": ERROR_SCHEMA,
        "kind": "module_flags",
        "message": format!("{} reported {} flag(s)", run.command, run.flags.len()),
        "flags": run.flags,
    })
}
