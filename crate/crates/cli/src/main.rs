//! `unital`: certify and decompose unital qubit channels from the command line.
//!
//! Exit codes: 0 completely positive (or success), 1 not completely
//! positive, 2 input error, 3 fast test and Choi oracle disagree.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod report;
mod spec_file;
mod sweep;

#[derive(Debug)]
pub enum CliError {
    Input(String),
    NotCp(String),
    Inconsistent(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::NotCp(_) => 1,
            CliError::Input(_) => 2,
            CliError::Inconsistent(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::NotCp(m) | CliError::Inconsistent(m) => m,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "unital", version, about = "Certify unital quantum operations in Bloch form")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Numerical tolerance for CP verdicts.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Write structured JSON output to this path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide complete positivity of a channel file.
    Check {
        spec: PathBuf,
        #[command(flatten)]
        common: Common,
        /// Also run the Choi-matrix oracle and require agreement.
        #[arg(long, overrides_with = "no_oracle")]
        oracle: bool,
        /// Run only the fast test when one applies (the default).
        #[arg(long = "no-oracle")]
        no_oracle: bool,
    },
    /// List an operator-sum decomposition.
    Kraus {
        spec: PathBuf,
        #[command(flatten)]
        common: Common,
        /// Fold √weight into each element (requires nonnegative weights).
        #[arg(long)]
        fold_weights: bool,
    },
    /// Sample diagonal specs and write verdicts as CSV.
    Sweep {
        /// Number of qubits.
        #[arg(long, default_value_t = 1)]
        n: usize,
        /// Points per axis for a regular grid over [min, max].
        #[arg(long, alias = "grid-spec", conflicts_with = "random", required_unless_present = "random")]
        grid: Option<usize>,
        /// Number of uniform random samples.
        #[arg(long)]
        random: Option<usize>,
        /// Seed for --random.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
        min: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        max: f64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Add the Choi-oracle minimum eigenvalue to each row.
        #[arg(long)]
        oracle: bool,
        /// CSV destination.
        #[arg(long)]
        out: PathBuf,
    },
    /// Factor a 3x3 Bloch matrix as rotation · diagonal · rotation.
    Factor {
        spec: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the Choi matrix and its eigenvalues.
    Choi {
        spec: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Check {
            spec,
            common,
            oracle,
            no_oracle,
        } => {
            let report = commands::check(&spec, common.tol, oracle && !no_oracle, common.out.as_deref())?;
            print!("{}", report.human());
            Ok(if report.is_cp { 0 } else { 1 })
        }
        Command::Kraus {
            spec,
            common,
            fold_weights,
        } => {
            let listing = commands::kraus(&spec, common.tol, fold_weights, common.out.as_deref())?;
            print!("{}", listing.human());
            Ok(0)
        }
        Command::Sweep {
            n,
            grid,
            random,
            seed,
            min,
            max,
            tol,
            oracle,
            out,
        } => {
            let sampling = match (grid, random) {
                (Some(k), None) => sweep::Sampling::Grid(k),
                (None, Some(k)) => sweep::Sampling::Random(k),
                _ => return Err(CliError::Input("give exactly one of --grid or --random".into())),
            };
            let cfg = sweep::SweepConfig {
                n,
                sampling,
                seed,
                lo: min,
                hi: max,
                tol,
                oracle,
            };
            let s = sweep::run(&cfg, &out)?;
            println!("rows: {}", s.rows);
            println!("cp: {}", s.cp);
            println!("boundary: {}", s.boundary);
            println!("not cp: {}", s.not_cp);
            println!("cp fraction (min beta >= -tol): {:.6}", s.cp_fraction);
            if oracle {
                println!("oracle disagreements: {}", s.oracle_disagreements);
            }
            Ok(0)
        }
        Command::Factor { spec, out } => {
            let listing = commands::factor(&spec, out.as_deref())?;
            print!("{}", listing.human());
            Ok(0)
        }
        Command::Choi { spec, common } => {
            let listing = commands::choi(&spec, common.tol, common.out.as_deref())?;
            print!("{}", listing.human());
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
