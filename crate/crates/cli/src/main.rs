//! `reinhardt`: classify Reinhardt domains in C² against the Serre class and
//! run the numerical verification harnesses.
//!
//! Exit codes:
//!
//! | code | meaning                                   |
//! |------|-------------------------------------------|
//! | 0    | success; for `classify`, a member         |
//! | 1    | invalid input or internal error           |
//! | 2    | a verification check failed               |
//! | 3    | `classify`: the domain is not a member    |

mod args;
mod commands;
mod error;
mod output;
mod schema;

use clap::Parser;
use std::process::ExitCode;

fn main() -> ExitCode {
    let cli = args::Cli::parse();
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            println!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
