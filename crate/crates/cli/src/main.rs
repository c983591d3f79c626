use std::fs;
use std::io::Write;
use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;

use grassnet_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn execute(cli: &Cli) -> anyhow::Result<bool> {
    let outcome = run(cli)?;
    let mut report_to_stderr = false;
    if let Some(data) = &outcome.data {
        match &cli.out {
            Some(path) => fs::write(path, data).with_context(|| format!("cannot write {}", path.display()))?,
            None => {
                print!("{data}");
                report_to_stderr = true;
            }
        }
    }
    let report = outcome.report.iter().map(|l| format!("{l}\n")).collect::<String>();
    if report_to_stderr {
        std::io::stderr().write_all(report.as_bytes())?;
    } else {
        std::io::stdout().write_all(report.as_bytes())?;
    }
    Ok(outcome.ok)
}
