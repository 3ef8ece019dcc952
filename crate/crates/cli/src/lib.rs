//! Library side of the `entrev` binary, kept separate so the command logic
//! can be driven from tests.

pub mod args;
pub mod tables;
pub mod verify;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use clap::error::ErrorKind;
use clap::Parser;
use entrev_core::criteria::criteria_report;
use entrev_core::PhysicalParams;

use args::{Cli, Command, Table};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_DOMAIN: u8 = 2;
/// Verification failures exit with `EXIT_DOMAIN + failures`, capped here.
pub const EXIT_MAX: u8 = 125;

#[derive(Debug)]
pub enum CliError {
    Io(io::Error),
    Csv(csv::Error),
    Json(serde_json::Error),
    Domain(entrev_core::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Io(e) => write!(f, "I/O error: {e}"),
            Self::Csv(e) => write!(f, "CSV error: {e}"),
            Self::Json(e) => write!(f, "JSON error: {e}"),
            Self::Domain(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        Self::Io(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        Self::Csv(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        Self::Json(e)
    }
}

impl From<entrev_core::Error> for CliError {
    fn from(e: entrev_core::Error) -> Self {
        Self::Domain(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Domain(_) => EXIT_DOMAIN,
            _ => EXIT_USAGE,
        }
    }
}

/// Opens `path` for writing, or stdout.
fn sink(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn table(
    table: Table,
    lambda_over_w: f64,
    alpha: f64,
    grid: &args::GridArgs,
    out: Option<&Path>,
) -> Result<u8, CliError> {
    let params = PhysicalParams::from_ratio(lambda_over_w, alpha)?;
    // Fail on the path before spending time on rows.
    let mut w = sink(out)?;
    tables::write_table(table, &params, grid, &mut w)?;
    w.flush()?;
    Ok(EXIT_OK)
}

fn execute(command: Command) -> Result<u8, CliError> {
    match command {
        Command::Evolve(a) => table(
            Table::Evolve,
            a.params.lambda_over_w,
            a.params.alpha,
            &a.grid,
            a.params.out.as_deref(),
        ),
        Command::Partitions(a) => table(
            Table::Partitions,
            a.params.lambda_over_w,
            a.params.alpha,
            &a.grid,
            a.params.out.as_deref(),
        ),
        Command::Quasimode(a) => table(
            Table::Quasimode,
            a.params.lambda_over_w,
            a.params.alpha,
            &a.grid,
            a.params.out.as_deref(),
        ),
        Command::Figure(a) => {
            let (kind, ratio, alpha) = a.id.preset();
            table(kind, ratio, alpha, &a.grid, a.out.as_deref())
        }
        Command::Criteria(a) => {
            let report = criteria_report(&PhysicalParams::from_ratio(a.lambda_over_w, a.alpha)?)?;
            let mut w = sink(a.out.as_deref())?;
            serde_json::to_writer_pretty(&mut w, &report)?;
            writeln!(w)?;
            w.flush()?;
            Ok(EXIT_OK)
        }
        Command::Verify(a) => {
            let outcomes = verify::run_suites(&a.ratios, a.inject_fault)?;
            let mut w = sink(a.out.as_deref())?;
            verify::write_report(&outcomes, &mut w)?;
            w.flush()?;
            let failed = outcomes
                .iter()
                .filter(|o| o.status == verify::Status::Fail)
                .count();
            Ok(if failed == 0 {
                EXIT_OK
            } else {
                (EXIT_DOMAIN as usize + failed).min(EXIT_MAX as usize) as u8
            })
        }
    }
}

/// Parses `argv`, runs the command and returns the process exit code.
pub fn run<I, T>(argv: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            // Printing can only fail if the terminal is gone.
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("entrev: {e}");
            e.exit_code()
        }
    }
}
