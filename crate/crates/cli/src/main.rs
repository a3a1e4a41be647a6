use std::process::ExitCode;

use clap::Parser;
use herglotz_cli::args::Cli;
use herglotz_cli::{error_json, flags_json, run};

/// Exit status when a module raised a divergence or non-convergence flag.
const EXIT_FLAGGED: u8 = 3;

fn init_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("HERGLOTZ_THREADS") {
        let n: usize = v.trim().parse().map_err(|_| anyhow::anyhow!("HERGLOTZ_THREADS must be a positive integer, got '{v}'"))?;
        if n == 0 {
            anyhow::bail!("HERGLOTZ_THREADS must be a positive integer, got 0");
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = init_threads().and_then(|_| run(&cli));
    match outcome {
        Ok(r) if r.flags.is_empty() => {
            println!("{}", cli.out.join(herglotz_cli::output::MANIFEST_FILE).display());
            ExitCode::SUCCESS
        }
        Ok(r) => {
            eprintln!("{}", flags_json(&r));
            ExitCode::from(EXIT_FLAGGED)
        }
        Err(e) => {
            eprintln!("{}", error_json(&e));
            ExitCode::FAILURE
        }
    }
}
