mod args;
mod cache;
mod commands;
mod report;

use args::Cli;
use clap::Parser;
use std::fmt;
use std::process::ExitCode;

pub const EXIT_USAGE: u8 = 2;
pub const EXIT_DATA: u8 = 3;
pub const EXIT_CERTIFICATE: u8 = 4;

/// A precondition failure detected before any computation.
#[derive(Debug)]
pub struct Usage(pub String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

/// Failure of the data pipeline, such as a zero list that does not pass the count.
#[derive(Debug)]
pub struct DataFailure(pub String);

impl fmt::Display for DataFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for DataFailure {}

fn exit_code(err: &anyhow::Error) -> u8 {
    use lmono::Error as E;
    if err.downcast_ref::<Usage>().is_some() {
        return EXIT_USAGE;
    }
    match err.downcast_ref::<E>() {
        Some(
            E::InvalidCharacter(_)
            | E::Pole(_)
            | E::Domain(_)
            | E::Precondition(_)
            | E::Tie { .. }
            | E::Overflow(_)
            | E::Convergence { .. }
            | E::Dominance(_)
            | E::Geometry(_),
        ) => EXIT_USAGE,
        _ => EXIT_DATA,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
