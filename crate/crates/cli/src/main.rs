use std::process::ExitCode;

use clap::Parser;
use localgpd_cli::error::CliError;
use localgpd_cli::report::error_json;
use localgpd_cli::{execute, schema, seed_from_env, Cli, Format, Settings};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = cli.command.name();
    let seed = seed_from_env(std::env::var("LOCALGPD_SEED").ok().as_deref());
    match run(&cli, seed) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            match cli.format {
                Format::Json => print!("{}", error_json(name, &e)),
                Format::Text => eprintln!("{name}: {} ({})", e, e.kind()),
            }
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli, seed: u64) -> Result<u8, CliError> {
    let bytes = match (&cli.input, cli.command.needs_input()) {
        (Some(path), _) => Some(std::fs::read(path).map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?),
        (None, true) => return Err(CliError::schema("--input", "this command reads an instance file")),
        (None, false) => None,
    };
    let exec = execute(&cli.command, &Settings::from_cli(cli, seed), bytes.as_deref())?;
    if let Some(path) = &cli.emit {
        let file = exec.emitted.as_ref().ok_or_else(|| CliError::schema("--emit", "this command has no instance to emit"))?;
        std::fs::write(path, schema::to_pretty(file)).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
    }
    match cli.format {
        Format::Json => print!("{}", exec.report.to_json()),
        Format::Text => print!("{}", exec.report.to_text()),
    }
    Ok(exec.report.exit_code() as u8)
}
