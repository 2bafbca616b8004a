mod commands;
mod opts;

use std::process::ExitCode;

use clap::Parser;

use opts::{Cli, Command};

/// Failure surfaced to the shell: usage problems exit 2, data problems 1.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
}

impl From<fpgivens::Error> for CliError {
    fn from(e: fpgivens::Error) -> Self {
        match e {
            fpgivens::Error::Config(_) => CliError::Usage(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match cli.command {
        Command::Convert(a) => commands::convert(&a),
        Command::Rotate(a) => commands::rotate(&a),
        Command::Qrd(a) => commands::qrd(&a),
        Command::Cycles(a) => commands::cycles(&a),
        Command::Sweep(a) => commands::sweep(&a),
        Command::Selftest => commands::selftest(),
    };
    match out {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Data(msg)) => {
            eprintln!("error: {}", msg.replace('\n', " "));
            ExitCode::from(1)
        }
    }
}
