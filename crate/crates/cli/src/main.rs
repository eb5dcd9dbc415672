//! `nfold`: Graver bases, n-fold integer programs and convex integer
//! maximization from the command line.

mod commands;
mod config;
mod failure;
mod instances;
mod io;
mod json;
mod verify;

use std::panic;
use std::process::ExitCode;

use clap::Parser;

use config::Cli;
use failure::{Failure, Status};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { Status::Usage.code() } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    panic::set_hook(Box::new(|info| eprintln!("nfold: internal error: {info}")));
    let status = match panic::catch_unwind(|| run(cli)) {
        Ok(Ok(status)) => status,
        Ok(Err(failure)) => {
            eprintln!("nfold: {failure}");
            failure.status()
        }
        Err(_) => Status::Internal,
    };
    ExitCode::from(status.code())
}

fn run(cli: Cli) -> Result<Status, Failure> {
    let cfg = cli.config()?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| Failure::Internal(format!("thread pool: {e}")))?
        .install(|| commands::dispatch(&cli.command, &cfg))
}
