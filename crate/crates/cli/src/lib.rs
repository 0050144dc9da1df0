//! Command-line front end: every subcommand turns flags (or a TOML config)
//! into a CSV or JSON artifact, deterministically in the seed.

pub mod args;
pub mod commands;
pub mod config;
pub mod grid;
pub mod output;

use std::path::Path;

use anyhow::{Context, Result};

use crate::args::{Cli, Command};
use crate::config::{resolve, ConfigFile};
use crate::output::{Format, Report};

pub const DEFAULT_SEED: u64 = 0;

/// Runs a parsed command line and returns the rendered bytes.
pub fn run(cli: &Cli) -> Result<Vec<u8>> {
    let config = match &cli.common.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let seed = cli.common.seed.or(config.seed).unwrap_or(DEFAULT_SEED);
    let format = match (cli.common.format, &config.format) {
        (Some(f), _) => Some(f),
        (None, Some(s)) => Some(
            <Format as clap::ValueEnum>::from_str(s, true)
                .map_err(|_| anyhow::anyhow!("config `format` must be csv or json, got {s:?}"))?,
        ),
        (None, None) => None,
    };
    let threads = commands::threads_from_env()?;
    let section = config.section(cli.command.name());

    let report = match &cli.command {
        Command::Accuracy(a) => Report::Table(commands::accuracy(&resolve(a, section)?)?),
        Command::RegionMap(a) => Report::Table(commands::region_map(&resolve(a, section)?)?),
        Command::GainSurface(a) => Report::Table(commands::gain_surface(&resolve(a, section)?)?),
        Command::Montecarlo(a) => {
            Report::Table(commands::montecarlo(&resolve(a, section)?, seed, threads)?)
        }
        Command::KrausVerify(a) => Report::Table(commands::kraus_verify(&resolve(a, section)?, seed)?),
        Command::Protocol(a) => {
            let format = format.unwrap_or(Format::Json);
            return commands::protocol(&resolve(a, section)?, seed, threads, format)?.render(format);
        }
    };
    report.render(format.unwrap_or(Format::Csv))
}

/// Writes `bytes` to `out`, or stdout when `out` is `None`.
pub fn emit(bytes: &[u8], out: Option<&Path>) -> Result<()> {
    use std::io::Write;
    match out {
        Some(path) => std::fs::write(path, bytes).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
            Ok(())
        }
    }
}
