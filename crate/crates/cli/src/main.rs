mod args;
mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser};

use args::Cli;
use config::CliError;

const EXIT_GATE_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = cli.command.name();
    let outcome = commands::run(&cli.command).and_then(|o| output::write(&o).map(|()| o));
    match outcome {
        Ok(o) if o.passed == Some(false) => {
            eprintln!("{name}: verification gate failed");
            ExitCode::from(EXIT_GATE_FAILED)
        }
        Ok(_) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            let mut cmd = Cli::command();
            cmd.build();
            let sub = cmd.find_subcommand_mut(name).expect("subcommand exists");
            sub.error(ErrorKind::ArgumentConflict, msg).exit()
        }
        Err(CliError::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(CliError::Core(e)) => {
            eprintln!("error: {e}");
            match e {
                kummer_core::Error::Domain(_) | kummer_core::Error::BinUnderflow { .. } => {
                    ExitCode::from(EXIT_USAGE)
                }
                // a numerical failure leaves the property unconfirmed
                _ => ExitCode::from(EXIT_GATE_FAILED),
            }
        }
    }
}
