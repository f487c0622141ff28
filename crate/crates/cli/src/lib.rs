//! Command-line front end for `robin-core`: argument types, command runners
//! and output rendering. The `robin` binary is a thin wrapper over [`run`].

pub mod args;
pub mod commands;
pub mod output;
pub mod verify;

use args::{Cli, Command};
use commands::SweepOutput;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PROPERTY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] robin_core::Error),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Core(e) if e.is_domain() => EXIT_USAGE,
            CliError::Core(_) | CliError::Io(_) => EXIT_NUMERICAL,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Core(e) if e.is_domain() => "domain",
            CliError::Core(_) => "numerical",
            CliError::Io(_) => "io",
        }
    }
}

/// What a command produced: bytes for stdout, lines for stderr, and an exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rendered {
    pub stdout: String,
    pub stderr: Vec<String>,
    pub exit_code: i32,
}

pub fn command_name(cli: &Cli) -> &'static str {
    match cli.command {
        Command::Eig(_) => "eig",
        Command::Sweep(_) => "sweep",
        Command::Crossing(_) => "crossing",
        Command::Verify(_) => "verify",
    }
}

/// Execute a parsed command line without touching the process streams.
pub fn run(cli: &Cli) -> Result<Rendered, CliError> {
    let ok = |stdout: String| Rendered { stdout, stderr: Vec::new(), exit_code: EXIT_OK };
    match &cli.command {
        Command::Eig(a) => Ok(ok(commands::eig(a)?.to_json())),
        Command::Sweep(a) => match commands::sweep_cmd(a)? {
            SweepOutput::Json(record) => Ok(ok(record.to_json())),
            SweepOutput::Csv { text, notes } => Ok(Rendered { stdout: text, stderr: notes, exit_code: EXIT_OK }),
        },
        Command::Crossing(a) => Ok(ok(commands::crossing(a)?.to_json())),
        Command::Verify(a) => {
            let (record, passed) = verify::verify(a.suite, a.r3)?;
            let exit_code = if passed { EXIT_OK } else { EXIT_PROPERTY };
            Ok(Rendered { stdout: record.to_json(), stderr: Vec::new(), exit_code })
        }
    }
}
