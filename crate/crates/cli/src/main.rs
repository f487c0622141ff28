use clap::Parser;
use robin_cli::args::Cli;
use robin_cli::output::error_line;
use robin_cli::{command_name, run, CliError};
use std::io::Write;
use std::process::ExitCode;

fn emit(cli: &Cli, text: &str) -> Result<(), CliError> {
    match &cli.out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = command_name(&cli);
    let code = match run(&cli).and_then(|r| emit(&cli, &r.stdout).map(|_| r)) {
        Ok(rendered) => {
            for line in &rendered.stderr {
                eprintln!("robin {name}: {line}");
            }
            rendered.exit_code
        }
        Err(e) => {
            eprintln!("robin {name}: {e}");
            print!("{}", error_line(name, e.kind(), &e.to_string()));
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
