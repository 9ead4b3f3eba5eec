use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use nmds::cli::{run, Cli, EXIT_USAGE};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn execute(cli: &Cli) -> anyhow::Result<u8> {
    let out = run(cli)?;
    match &cli.out {
        Some(path) => std::fs::write(path, &out.text)?,
        None => std::io::stdout().write_all(out.text.as_bytes())?,
    }
    Ok(out.code)
}
