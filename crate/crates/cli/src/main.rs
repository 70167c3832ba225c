//! `rnbrw` command-line front end.
//!
//! Exit codes: 0 success, 2 usage error, 3 data error (I/O, malformed or
//! mismatched input), 4 algorithmic abort (e.g. a graph with no cycles).

mod commands;
mod config;
mod sweep;

use std::process::ExitCode;

use clap::Parser;

use config::Cli;

/// Error tagged with the process exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

impl Failure {
    pub fn usage(msg: impl Into<String>) -> Self {
        Failure {
            code: 2,
            error: anyhow::anyhow!(msg.into()),
        }
    }

    pub fn data(error: impl Into<anyhow::Error>) -> Self {
        Failure {
            code: 3,
            error: error.into(),
        }
    }

    pub fn context(self, msg: impl std::fmt::Display + Send + Sync + 'static) -> Self {
        Failure {
            code: self.code,
            error: self.error.context(msg),
        }
    }
}

impl From<rnbrw::Error> for Failure {
    fn from(e: rnbrw::Error) -> Self {
        use rnbrw::Error::*;
        let code = match e {
            InvalidParameter(_) => 2,
            DiscardCapExceeded { .. } | Acyclic | Generation(_) | ZeroWeight | TooLarge { .. } => 4,
            _ => 3,
        };
        Failure { code, error: e.into() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::data(e)
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::data(e)
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::data(e)
    }
}

pub type CliResult<T> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
