mod args;
mod commands;
mod error;
mod output;

use std::fs;
use std::io::{self, Write};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::Cli;
use error::CliError;

fn emit(cli: &Cli, bytes: &[u8]) -> Result<(), CliError> {
    match &cli.output {
        Some(path) => fs::write(path, bytes).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => io::stdout()
            .lock()
            .write_all(bytes)
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            }),
    }
}

fn run(cli: &Cli) -> Result<u8, CliError> {
    let out = commands::run(&cli.command)?;
    let bytes = match out.text {
        Some(text) => text.into_bytes(),
        None => output::render(commands::name(&cli.command), out.verdict, &out.report),
    };
    emit(cli, &bytes)?;
    Ok(match out.verdict {
        Some(false) => 1,
        _ => 0,
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(64),
            };
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("metric-embed: {e}");
            ExitCode::from(e.status())
        }
    }
}
