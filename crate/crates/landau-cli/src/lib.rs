//! Command-line front end: spectrum tables, eigenfunction samples, state
//! lattices, the Morse reduction, contraction sweeps and the verification
//! suites, each emitted as CSV or JSON.

pub mod commands;
pub mod number;
pub mod output;
pub mod verify;

use anyhow::Result;
use clap::{Parser, Subcommand, ValueEnum};
use landau::spectrum::Family;

use number::{parse_number, Number};
use output::{Format, Table};
use verify::Suite;

#[derive(Debug, Parser)]
#[command(name = "landau", version, about = "Landau levels on surfaces of constant curvature")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Tolerance replacing every default tolerance of `verify`.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Seed for the random test fields and sample points of `verify`.
    #[arg(long = "seed-grid", global = true, default_value_t = 1)]
    pub seed_grid: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Lowest,
    Highest,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Lowest => Family::Lowest,
            FamilyArg::Highest => Family::Highest,
        }
    }
}

fn number_arg(s: &str) -> Result<Number, String> {
    parse_number(s).map_err(|e| e.to_string())
}

fn n_arg(s: &str) -> Result<Option<u32>, String> {
    if s == "inf" {
        return Ok(None);
    }
    s.parse::<u32>().map(Some).map_err(|_| format!("expected a positive integer or \"inf\", got {s:?}"))
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Energies, degeneracies and m-ranges of the levels.
    Spectrum {
        #[arg(long, allow_hyphen_values = true, value_parser = number_arg)]
        kappa: Number,
        #[arg(long, allow_hyphen_values = true, value_parser = number_arg)]
        beta: Number,
        /// Defaults to the family selected by the sign of β.
        #[arg(long, value_enum)]
        family: Option<FamilyArg>,
        #[arg(long, default_value_t = 5)]
        l_max: u64,
    },
    /// Samples of a normalized radial eigenfunction.
    Eigenfunction {
        #[arg(long, allow_hyphen_values = true, value_parser = number_arg)]
        kappa: Number,
        #[arg(long, allow_hyphen_values = true, value_parser = number_arg)]
        beta: Number,
        #[arg(long)]
        l: i64,
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        #[arg(long, default_value_t = 0.0)]
        r_min: f64,
        /// Defaults to the antipode on the sphere and 6 otherwise.
        #[arg(long)]
        r_max: Option<f64>,
        #[arg(long, default_value_t = 101)]
        samples: usize,
    },
    /// Normalizable states for the boundary twist α, with their vacuum lines.
    Lattice {
        #[arg(long, allow_hyphen_values = true, value_parser = number_arg)]
        kappa: Number,
        #[arg(long, allow_hyphen_values = true, value_parser = number_arg)]
        beta: Number,
        #[arg(long, default_value_t = 0.0)]
        alpha: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = -6)]
        n_min: i64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 10)]
        n_max: i64,
        #[arg(long, default_value_t = 3.0)]
        l_max: f64,
    },
    /// Continuum threshold and bound states of the horocyclic Morse problem.
    Morse {
        #[arg(long, allow_hyphen_values = true, value_parser = number_arg)]
        kappa: Number,
        #[arg(long, allow_hyphen_values = true, value_parser = number_arg)]
        beta: Number,
        /// Separation constant.
        #[arg(long = "lambda", allow_hyphen_values = true, default_value_t = 0.0)]
        lambda_sep: f64,
    },
    /// Deviation from the planar eigenfunction along κ = 2β/n.
    Contract {
        #[arg(long, value_parser = number_arg)]
        beta: Number,
        /// Comma-separated n values; "inf" requests κ = 0.
        #[arg(long = "n", value_delimiter = ',', value_parser = n_arg,
              default_value = "8,16,32,64,128,256,512,1024")]
        n_list: Vec<Option<u32>>,
        #[arg(long, default_value_t = 0)]
        l: u32,
        #[arg(long, default_value_t = 0)]
        m: u32,
        #[arg(long, default_value_t = 4.0)]
        r_max: f64,
        #[arg(long, default_value_t = 41)]
        samples: usize,
    },
    /// Run verification suites; exit status 1 when any check fails.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
    },
}

/// The table to print and whether every check in it passed. Errors are
/// parameter errors.
pub struct Outcome {
    pub table: Table,
    pub passed: bool,
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let table = match &cli.command {
        Command::Spectrum { kappa, beta, family, l_max } => {
            commands::spectrum(*kappa, *beta, family.map(Into::into), *l_max)?
        }
        Command::Eigenfunction { kappa, beta, l, m, r_min, r_max, samples } => {
            let grid = commands::Sampling { r_min: *r_min, r_max: *r_max, samples: *samples };
            commands::eigenfunction_table(*kappa, *beta, *l, *m, grid)?
        }
        Command::Lattice { kappa, beta, alpha, n_min, n_max, l_max } => {
            let window = commands::Window { n_min: *n_min, n_max: *n_max, l_max: *l_max };
            commands::lattice(*kappa, *beta, *alpha, window)?
        }
        Command::Morse { kappa, beta, lambda_sep } => commands::morse(*kappa, *beta, *lambda_sep)?,
        Command::Contract { beta, n_list, l, m, r_max, samples } => {
            commands::contract(*beta, n_list, *l, *m, *r_max, *samples)?
        }
        Command::Verify { suite } => {
            let opts = verify::Options { tol: cli.tol, seed: cli.seed_grid };
            let report = verify::run_suite(*suite, &opts);
            let passed = report.passed();
            return Ok(Outcome { table: report.to_table(*suite, &opts), passed });
        }
    };
    Ok(Outcome { table, passed: true })
}
