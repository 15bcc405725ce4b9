//! `pbop`: verification suites, experiments and plots for the truncated
//! block operator `T_m`.
//!
//! Exit status: 0 pass, 1 assertion failure, 2 usage or input error,
//! 3 resource-guard refusal.

mod args;
mod experiment;
mod plot;
mod report;
mod verify;

use std::fmt;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

/// Invalid arguments or unreadable input, reported with exit status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub enum Status {
    Pass,
    Fail(Vec<String>),
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<pbop_core::Error>() {
        Some(pbop_core::Error::ResourceGuard { .. } | pbop_core::Error::DenseCapExceeded { .. }) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Verify {
            common,
            corrupt_generator,
        } => verify::run(common, *corrupt_generator),
        Command::Experiment { name, common } => experiment::run(*name, common),
        Command::Plot { report, out } => {
            let dir = out
                .clone()
                .or_else(|| report.parent().map(|p| p.to_path_buf()))
                .unwrap_or_default();
            plot::render(report, &dir).map(|paths| {
                for p in paths {
                    println!("plot written to {}", p.display());
                }
                Status::Pass
            })
        }
    };
    match result {
        Ok(Status::Pass) => ExitCode::SUCCESS,
        Ok(Status::Fail(msgs)) => {
            for m in msgs {
                eprintln!("assertion failed: {m}");
            }
            ExitCode::from(1)
        }
        Err(e) => {
            let code = exit_code(&e);
            let kind = if code == 3 { "resource guard" } else { "error" };
            eprintln!("{kind}: {e:#}");
            ExitCode::from(code)
        }
    }
}
