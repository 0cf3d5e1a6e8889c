mod args;
mod commands;
mod error;
mod input;
mod render;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

fn main() -> ExitCode {
    // Usage errors exit 1; clap's default of 2 is reserved for refuted checks.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match &cli.command {
        Command::Check(a) => commands::check(a),
        Command::Embed(a) => commands::embed(a),
        Command::Family(a) => commands::family(a),
        Command::Spectrum(a) => commands::spectrum(a),
    };
    match result {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            // A closed pipe is not worth reporting.
            let _ = stdout.write_all(out.stdout.as_bytes());
            let _ = stdout.flush();
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("crg: {e}");
            ExitCode::from(1)
        }
    }
}
