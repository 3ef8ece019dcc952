use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "entrev",
    version,
    about = "Entanglement revival and sudden death of two atoms in Lorentzian reservoirs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pair concurrences and populations over time (CSV)
    Evolve(RunArgs),
    /// I-concurrences of the six labelled partitions and C_N over time (CSV)
    Partitions(RunArgs),
    /// Atom, quasimode and continuum populations over time (CSV)
    Quasimode(RunArgs),
    /// Revival and sudden-death criteria for one parameter set (JSON)
    Criteria(ParamArgs),
    /// Run the self-verification suites
    Verify(VerifyArgs),
    /// Reproduce the data behind one figure with its preset parameters
    Figure(FigureArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    /// Reservoir width over coupling strength
    #[arg(long, default_value_t = 0.1)]
    pub lambda_over_w: f64,

    /// Weight of |0000> in the initial state; beta = sqrt(1 - alpha^2)
    #[arg(long, default_value_t = 1.0 / 10f64.sqrt())]
    pub alpha: f64,

    /// Output file; stdout when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    /// Last sample of the dimensionless time tau = lambda t
    #[arg(long, default_value_t = 50.0, value_parser = positive_f64)]
    pub tau_max: f64,

    /// Number of rows, including tau = 0 and tau = tau_max
    #[arg(long, default_value_t = 1001, value_parser = clap::value_parser!(u64).range(2..))]
    pub samples: u64,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub params: ParamArgs,

    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Comma-separated list of lambda/W values
    #[arg(long = "lambda-over-w", value_delimiter = ',', default_values_t = [0.1, 0.2])]
    pub ratios: Vec<f64>,

    /// Report file; stdout when absent
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Deliberately corrupt one formula to check that the suites notice
    #[arg(long, hide = true)]
    pub inject_fault: Option<Fault>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Fault {
    /// Flip the sign of the decay term in the revival threshold
    ThresholdSign,
}

#[derive(Debug, Clone, Args)]
pub struct FigureArgs {
    /// One of 1a, 1b, 1c, 1d, 1e, 1f, 2, 3, 4
    pub id: FigureId,

    #[command(flatten)]
    pub grid: GridArgs,

    /// Output file; stdout when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureId {
    Fig1(char),
    Fig2,
    Fig3,
    Fig4,
}

/// What a figure plots.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Table {
    Evolve,
    Partitions,
    Quasimode,
}

impl FigureId {
    /// `(table, lambda/W, alpha)` preset for the figure.
    pub fn preset(self) -> (Table, f64, f64) {
        let inv_sqrt10 = 1.0 / 10f64.sqrt();
        match self {
            Self::Fig1('a') => (Table::Evolve, 0.2, std::f64::consts::FRAC_1_SQRT_2),
            Self::Fig1('b') => (Table::Evolve, 0.2, 10f64.sqrt() / 5.0),
            Self::Fig1('c') => (Table::Evolve, 0.2, 0.25),
            Self::Fig1('d') => (Table::Evolve, 0.1, 2.0 * 2f64.sqrt() / 5.0),
            Self::Fig1('e') => (Table::Evolve, 0.1, 1.0 / 5f64.sqrt()),
            Self::Fig1(_) => (Table::Evolve, 0.1, 3f64.sqrt() / 5.0),
            Self::Fig2 => (Table::Evolve, 0.1, inv_sqrt10),
            Self::Fig3 => (Table::Partitions, 0.2, inv_sqrt10),
            // alpha plays no role in the populations.
            Self::Fig4 => (Table::Quasimode, 0.1, inv_sqrt10),
        }
    }
}

impl FromStr for FigureId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "2" => Ok(Self::Fig2),
            "3" => Ok(Self::Fig3),
            "4" => Ok(Self::Fig4),
            _ => match s.strip_prefix('1').map(|r| r.chars().collect::<Vec<_>>()) {
                Some(rest) if rest.len() == 1 && ('a'..='f').contains(&rest[0]) => {
                    Ok(Self::Fig1(rest[0]))
                }
                _ => Err(format!(
                    "unknown figure '{s}' (expected 1a, 1b, 1c, 1d, 1e, 1f, 2, 3 or 4)"
                )),
            },
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Fig1(c) => write!(f, "1{c}"),
            Self::Fig2 => f.write_str("2"),
            Self::Fig3 => f.write_str("3"),
            Self::Fig4 => f.write_str("4"),
        }
    }
}

fn positive_f64(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(format!("{s} is not a positive finite number"))
    }
}
