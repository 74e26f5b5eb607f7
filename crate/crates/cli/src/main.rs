//! `gablat`: Gaussian Gabor frame bounds on phase-space lattices.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 numeric failure,
//! 3 resource cap exceeded.

mod args;
mod commands;
#[cfg(feature = "png")]
mod plot;
#[cfg(not(feature = "png"))]
#[path = "plot_disabled.rs"]
mod plot;

use std::process::ExitCode;

use clap::Parser;
use gabor_lattice::Error;

use args::Cli;

/// Failure categories, each with its own exit status.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Numeric(String),
    Resource(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Numeric(_) => 2,
            Failure::Resource(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Numeric(m) | Failure::Resource(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::Resource { .. } => Failure::Resource(msg),
            Error::Parse(_)
            | Error::Catalog(_)
            | Error::Domain(_)
            | Error::InvalidLattice(_)
            | Error::Dimension(_)
            | Error::UnsupportedDimension { .. }
            | Error::DualityPrecondition { .. } => Failure::Usage(msg),
            Error::NotAFrame(_)
            | Error::Numeric(_)
            | Error::InternalConsistency(_)
            | Error::DomainTruncation(_)
            | Error::TruncationWarning { .. } => Failure::Numeric(msg),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(format!("I/O error: {e}"))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // Help and version requests are not errors.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("gablat: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
