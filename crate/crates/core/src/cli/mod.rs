//! The `ggf` command line.

pub mod parse;
pub mod script;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::families::{family_series, Family, FamilySpec, Mode};
use crate::oracle::{count_bivariate, count_series, enumerate};
use crate::series::{specialize, SpecializationMap};
use crate::solver::{cmatrix_fast_path, SolveError, Solver};
use crate::system::ConstraintSystem;
use crate::verify::{run_suite, Suite};

pub use parse::{parse_constraint_file, parse_file, parse_gf_file, ConstraintFile, ParseError};
pub use script::{run_script, Derivation, ScriptError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "ggf",
    version,
    about = "Generating functions of linear Diophantine systems"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the generating function of a constraint file.
    Solve {
        file: PathBuf,
        /// Try the closed form for square systems with an integral inverse first.
        #[arg(long)]
        fast_path: bool,
    },
    /// Expand the solved generating function with every variable sent to q.
    Expand {
        file: PathBuf,
        #[arg(long)]
        weight: usize,
        /// Send this variable to s instead of q.
        #[arg(long)]
        track: Option<String>,
    },
    /// Count solutions by enumeration.
    Count {
        file: PathBuf,
        #[arg(long)]
        weight: usize,
        /// Dump the solutions instead of the counts.
        #[arg(long)]
        list: bool,
        /// Send this variable to s instead of q.
        #[arg(long, conflicts_with = "list")]
        track: Option<String>,
    },
    /// Series of a named partition family (minc, tworow, alhc, tlhp, lhp).
    Family {
        name: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        weight: usize,
        /// recurrence, iterated, univariate, closed, brute, oracle or solver.
        #[arg(long, default_value = "recurrence")]
        mode: String,
        /// One coefficient per line.
        #[arg(long)]
        list: bool,
    },
    /// Run the self-check suites.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        cases: usize,
    },
    /// Run a derivation script on a constraint file.
    Steps { file: PathBuf, script: PathBuf },
    /// Re-print a generating-function file canonically, or expand it.
    Gf {
        file: PathBuf,
        #[arg(long)]
        weight: Option<usize>,
        #[arg(long, requires = "weight")]
        track: Option<String>,
    },
}

/// A failed command: the message and the exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(e: impl std::fmt::Display) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: e.to_string(),
        }
    }
}

impl From<SolveError> for Failure {
    fn from(e: SolveError) -> Self {
        let code = match e {
            SolveError::BudgetExhausted(_) => EXIT_BUDGET,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn load_system(path: &Path) -> Result<ConstraintSystem, Failure> {
    parse_file(&read(path)?).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn spec_map(
    vars: &crate::system::VarTable,
    track: Option<&str>,
) -> Result<SpecializationMap, Failure> {
    match track {
        None => Ok(SpecializationMap::all_q(vars.len())),
        Some(name) => {
            let v = vars.lookup(name).map_err(Failure::usage)?;
            Ok(SpecializationMap::tracking(vars.len(), v))
        }
    }
}

/// Runs one parsed command, writing its normal output to `out`.
pub fn execute(cmd: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    let io = |e: std::io::Error| Failure::usage(e);
    match cmd {
        Command::Solve { file, fast_path } => {
            let s = load_system(&file)?;
            let fast = if fast_path {
                cmatrix_fast_path(&s)
            } else {
                None
            };
            let f = match fast {
                Some(f) => f,
                None => Solver::from_env().solve(&s)?,
            };
            write!(out, "{f}").map_err(io)?;
        }
        Command::Expand {
            file,
            weight,
            track,
        } => {
            let s = load_system(&file)?;
            let map = spec_map(s.vars(), track.as_deref())?;
            let f = Solver::from_env().solve(&s)?;
            let series = specialize(&f, &map, weight).map_err(Failure::usage)?;
            writeln!(out, "{series}").map_err(io)?;
        }
        Command::Count {
            file,
            weight,
            list,
            track,
        } => {
            let s = load_system(&file)?;
            if list {
                write!(out, "{}", enumerate(&s, weight)).map_err(io)?;
            } else if let Some(name) = track {
                let v = s.vars().lookup(&name).map_err(Failure::usage)?;
                writeln!(out, "{}", count_bivariate(&s, weight, v)).map_err(io)?;
            } else {
                writeln!(out, "{}", count_series(&s, weight)).map_err(io)?;
            }
        }
        Command::Family {
            name,
            n,
            k,
            weight,
            mode,
            list,
        } => {
            let family: Family = name.parse().map_err(Failure::usage)?;
            let mode: Mode = mode.parse().map_err(Failure::usage)?;
            let series = family_series(&FamilySpec::new(family, n, k), weight, mode).map_err(
                |e| match e {
                    crate::families::FamilyError::Solve(s) => Failure::from(s),
                    other => Failure::usage(other),
                },
            )?;
            if list {
                write!(out, "{}", series.to_list()).map_err(io)?;
            } else {
                writeln!(out, "{series}").map_err(io)?;
            }
        }
        Command::Verify { suite, seed, cases } => {
            let suite: Suite = suite.parse().map_err(Failure::usage)?;
            let report = run_suite(suite, seed, cases);
            write!(out, "{report}").map_err(io)?;
            let passed = report.checks.iter().filter(|c| c.passed).count();
            writeln!(out, "{passed}/{} checks passed", report.checks.len()).map_err(io)?;
            if !report.passed() {
                return Ok(EXIT_VERIFY);
            }
        }
        Command::Steps { file, script } => {
            let s = load_system(&file)?;
            let text = read(&script)?;
            let d = run_script(&s, &text, &Solver::from_env()).map_err(|e| Failure {
                code: if e.is_budget() {
                    EXIT_BUDGET
                } else {
                    EXIT_USAGE
                },
                message: format!("{}: {e}", script.display()),
            })?;
            for line in &d.trace {
                writeln!(out, "{line}").map_err(io)?;
            }
            writeln!(out, "result:").map_err(io)?;
            write!(out, "{}", d.gf).map_err(io)?;
        }
        Command::Gf {
            file,
            weight,
            track,
        } => {
            let f = parse_gf_file(&read(&file)?)
                .map_err(|e| Failure::usage(format!("{}: {e}", file.display())))?;
            match weight {
                None => write!(out, "{f}").map_err(io)?,
                Some(w) => {
                    let map = spec_map(f.vars(), track.as_deref())?;
                    let series = specialize(&f, &map, w).map_err(Failure::usage)?;
                    writeln!(out, "{series}").map_err(io)?;
                }
            }
        }
    }
    Ok(EXIT_OK)
}

/// Parses `args` (program name first) and runs; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return if code == 0 { EXIT_OK } else { EXIT_USAGE };
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
