//! `wavebound` command-line tool.
//!
//! Exit codes: 0 success (and every certificate check passed), 1 a
//! certificate check failed, 2 usage or input error, 3 the solver did not
//! produce a converged wave.

mod args;
mod commands;

use std::fmt;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

pub const EXIT_CERTIFICATION: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_SOLVER: u8 = 3;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl fmt::Display) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.to_string(),
        }
    }
}

impl From<wavebound::Error> for Failure {
    fn from(e: wavebound::Error) -> Self {
        use wavebound::Error::*;
        let code = match e {
            Monotonicity { .. }
            | NoConvergence { .. }
            | BifurcationNotFound { .. }
            | BranchTerminated { .. }
            | Unconverged { .. }
            | RootFinding(_) => EXIT_SOLVER,
            _ => EXIT_USAGE,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Bounds(flags) => flags.resolve().and_then(|f| commands::bounds(&f)),
        Command::Solve(flags) => flags.resolve().and_then(|f| commands::solve(&f)),
        Command::Certify { wavefile, flags } => flags
            .resolve()
            .and_then(|f| commands::certify(&wavefile, &f)),
        Command::Sweep(flags) => flags.resolve().and_then(|f| commands::sweep(&f)),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
