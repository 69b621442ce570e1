mod args;
mod commands;

use std::io::Write;
use std::process::ExitCode;

use args::{AinftyCmd, BlowupCmd, Cli, Command, HhCmd, OcCmd, PotentialCmd, TreesCmd};
use clap::error::ErrorKind;
use clap::Parser;
use serde::Serialize;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Lib(#[from] blowsplit::Error),
    #[error("usage: {0}")]
    Usage(String),
    #[error("io: {0}")]
    Io(String),
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Lib(e) => e.kind(),
            CliError::Usage(_) => "usage",
            CliError::Io(_) => "io",
        }
    }

    /// 1 is reserved for a report whose checks did not all pass.
    fn code(&self) -> u8 {
        use blowsplit::Error::*;
        match self {
            CliError::Usage(_) => 2,
            CliError::Lib(MalformedRational(_)) => 3,
            CliError::Lib(EnumerationBudget(_)) => 4,
            CliError::Lib(Unstable(_)) => 5,
            CliError::Lib(NonConvergentDeformation(_)) => 6,
            CliError::Lib(DegenerateQuadraticForm) => 7,
            CliError::Lib(NotCritical(_)) => 8,
            CliError::Lib(ShiftTooLarge(_)) => 9,
            CliError::Lib(MalformedAlgebra(_)) => 10,
            CliError::Lib(InvalidInput(_)) => 11,
            CliError::Lib(DivisionByZero) => 12,
            CliError::Io(_) => 13,
        }
    }
}

#[derive(Serialize)]
struct ErrorJson<'a> {
    error: &'a str,
    exit_code: u8,
    message: String,
}

fn run(cli: Cli) -> Result<commands::Outcome, CliError> {
    let cutoff = args::rational(&cli.cutoff)?;
    let f = cli.format;
    match &cli.command {
        Command::Trees(TreesCmd::Enumerate { boundary, interior, mode }) => commands::trees_enumerate(*boundary, *interior, *mode, f),
        Command::Ainfty(AinftyCmd::Verify { file }) => commands::ainfty_verify(file, &cutoff, f),
        Command::Hh(HhCmd::Dims { file, length }) => commands::hh_dims(file, *length, &cutoff, f),
        Command::Potential(PotentialCmd::Crit(a)) => commands::potential_crit(a, &cutoff, cli.order, f),
        Command::Oc(OcCmd::Matrix(a)) => commands::oc(a, &cutoff, cli.order, f),
        Command::Blowup(BlowupCmd::Split { n, eps }) => commands::blowup_split(*n, eps, &cutoff, f),
        Command::VerifyAll(a) => commands::verify(a.seed, a.hh_length, &a.eps, &cutoff, f),
    }
    .and_then(|out| match &cli.output {
        Some(path) => std::fs::write(path, &out.text).map(|_| commands::Outcome { text: String::new(), passed: out.passed }).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => Ok(out),
    })
}

fn fail(e: CliError) -> ExitCode {
    let j = ErrorJson { error: e.kind(), exit_code: e.code(), message: e.to_string() };
    println!("{}", serde_json::to_string(&j).unwrap_or_default());
    ExitCode::from(e.code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail(CliError::Usage(e.render().to_string().lines().next().unwrap_or_default().trim_start_matches("error: ").to_string())),
    };
    match run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.text.as_bytes()).is_err() {
                return ExitCode::from(13);
            }
            if out.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => fail(e),
    }
}
