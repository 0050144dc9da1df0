use std::process::ExitCode;

use clap::Parser;
use qpos_cli::args::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match qpos_cli::run(&cli).and_then(|bytes| qpos_cli::emit(&bytes, cli.common.out.as_deref())) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
