//! `susyjc`: spectra, crossings, Wigner grids, verification reports and
//! factorizable-model analyses as CSV or JSON.

mod config;
mod crossings;
mod error;
mod far;
mod output;
mod spectrum;
mod verify;
mod wigner;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{emit, Table};

#[derive(Parser, Debug)]
#[command(name = "susyjc", version, about = "Spectral analysis of Jaynes-Cummings type models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Lowest levels over a parameter sweep, with closed forms where they exist.
    Spectrum(RunConfig),
    /// Closed-form and numerically located level crossings of the JC model.
    Crossings(RunConfig),
    /// Wigner function of a dressed state's boson mode on a square grid.
    Wigner(RunConfig),
    /// Closed forms checked against the numerical oracle; exit 4 on failure.
    Verify(RunConfig),
    /// Operator identity residuals; exit 4 on failure.
    VerifyAlgebra(RunConfig),
    /// Factorizable model parameters, constraints and spectrum shape.
    Far(RunConfig),
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("SUSYJC_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("SUSYJC_THREADS must be a positive integer, got '{raw}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    let (cfg, result): (RunConfig, Result<(Table, bool), CliError>) = match cli.command {
        Command::Spectrum(c) => {
            let c = c.resolve()?;
            let r = spectrum::run(&c).map(|t| (t, true));
            (c, r)
        }
        Command::Crossings(c) => {
            let c = c.resolve()?;
            let r = crossings::run(&c).map(|t| (t, true));
            (c, r)
        }
        Command::Wigner(c) => {
            let c = c.resolve()?;
            let r = wigner::run(&c).map(|t| (t, true));
            (c, r)
        }
        Command::Verify(c) => {
            let c = c.resolve()?;
            let r = verify::run(&c);
            (c, r)
        }
        Command::VerifyAlgebra(c) => {
            let c = c.resolve()?;
            let r = verify::run_algebra(&c);
            (c, r)
        }
        Command::Far(c) => {
            let c = c.resolve()?;
            let r = far::run(&c).map(|t| (t, true));
            (c, r)
        }
    };
    let (table, passed) = result?;
    emit(&table.render(cfg.format()), cfg.output.as_deref())?;
    if passed {
        Ok(())
    } else {
        Err(CliError::Consistency(format!("{} reported failing checks", table.meta["command"])))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("susyjc: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
