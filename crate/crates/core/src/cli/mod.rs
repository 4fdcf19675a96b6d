//! Command-line front end: argument parsing, file loading and report rendering.

mod commands;
mod files;

pub use files::{parse_datum_file, parse_group_document, BranchEntry, DatumFile, TupleFile};

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::group::DEFAULT_ELEMENT_CAP;
use crate::hurwitz::{DEFAULT_MAX_GROUP, DEFAULT_MAX_ORBIT};

pub const MAX_GROUP_ENV: &str = "COVERFORGE_MAX_GROUP";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Invalid(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Input(_) => 1,
            CliError::Invalid(_) => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "coverforge", version, about = "Exact computations for finite Galois branched covers of curves")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Add floating-point approximations next to cyclotomic values.
    #[arg(long, global = true)]
    approx: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a datum file against the Riemann existence conditions.
    Validate { file: PathBuf },
    /// Genus of the cover and fiber structure over each branch point.
    Genus { file: PathBuf },
    /// Chevalley-Weil multiplicities, Hodge types and supports per irreducible.
    Cw { file: PathBuf },
    /// Block-diagonal local monodromy matrices (cyclic and dihedral groups).
    Monodromy {
        file: PathBuf,
        /// Only this branch label.
        #[arg(long)]
        branch: Option<String>,
    },
    /// Branch points where each isotypic local system has nontrivial monodromy.
    Support { file: PathBuf },
    /// Quotient cover by the normal subgroup generated by the given elements.
    Quotient {
        file: PathBuf,
        /// Comma-separated generators, e.g. "a^3" or "a^2,b".
        #[arg(long)]
        normal: String,
    },
    /// Collide two adjacent branch points (1-based positions).
    Collide {
        file: PathBuf,
        #[arg(long, num_args = 2, value_names = ["I", "J"], required = true)]
        merge: Vec<usize>,
    },
    /// Inertia profile, mu_h table and infinity criterion for dihedral data.
    DihedralAnalyze { file: PathBuf },
    /// Braid orbit census of a monodromy tuple.
    HurwitzOrbits {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MAX_ORBIT)]
        max_orbit: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_GROUP)]
        max_group: usize,
    },
    /// Character table of the group named in the file.
    CharTable { file: PathBuf },
}

/// What a command invocation printed and how it exited.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// Structured report emitted with `--format json`.
#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub input: serde_json::Value,
    pub result: serde_json::Value,
    pub warnings: Vec<String>,
}

/// A command's result in both renderings, plus whether it counts as a failure.
pub(crate) struct Rendered {
    pub input: serde_json::Value,
    pub text: String,
    pub json: serde_json::Value,
    pub warnings: Vec<String>,
    pub failed: bool,
}

pub(crate) struct Context {
    pub cap: usize,
    pub approx: bool,
}

/// Runs the CLI with the process environment.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with_cap_override(args, std::env::var(MAX_GROUP_ENV).ok())
}

/// Runs the CLI with an explicit value for the element-cap override.
pub fn run_with_cap_override<I, T>(args: I, max_group: Option<String>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let code = if e.use_stderr() { 1 } else { 0 };
            return if code == 0 {
                Outcome { stdout: text, stderr: String::new(), code }
            } else {
                Outcome { stdout: String::new(), stderr: text, code }
            };
        }
    };
    let cap = match max_group {
        None => DEFAULT_ELEMENT_CAP,
        Some(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => n,
            _ => {
                return Outcome {
                    stdout: String::new(),
                    stderr: format!("error: {MAX_GROUP_ENV} must be a positive integer, got `{v}`\n"),
                    code: 1,
                }
            }
        },
    };
    let ctx = Context { cap, approx: cli.approx };
    let name = command_name(&cli.command);
    match dispatch(&ctx, &cli.command) {
        Ok(r) => {
            let code = if r.failed { 2 } else { 0 };
            let mut stderr = String::new();
            let stdout = match cli.format {
                Format::Text => {
                    for w in &r.warnings {
                        stderr.push_str(&format!("warning: {w}\n"));
                    }
                    r.text
                }
                Format::Json => {
                    let report = Report {
                        command: name.to_string(),
                        input: r.input,
                        result: r.json,
                        warnings: r.warnings,
                    };
                    let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
                    s.push('\n');
                    s
                }
            };
            Outcome { stdout, stderr, code }
        }
        Err(e) => Outcome { stdout: String::new(), stderr: format!("error: {e}\n"), code: e.exit_code() },
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Validate { .. } => "validate",
        Command::Genus { .. } => "genus",
        Command::Cw { .. } => "cw",
        Command::Monodromy { .. } => "monodromy",
        Command::Support { .. } => "support",
        Command::Quotient { .. } => "quotient",
        Command::Collide { .. } => "collide",
        Command::DihedralAnalyze { .. } => "dihedral-analyze",
        Command::HurwitzOrbits { .. } => "hurwitz-orbits",
        Command::CharTable { .. } => "char-table",
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn dispatch(ctx: &Context, command: &Command) -> Result<Rendered, CliError> {
    use commands::*;
    match command {
        Command::Validate { file } => validate(ctx, file, &read(file)?),
        Command::Genus { file } => genus(ctx, file, &read(file)?),
        Command::Cw { file } => cw(ctx, file, &read(file)?),
        Command::Monodromy { file, branch } => monodromy(ctx, file, &read(file)?, branch.as_deref()),
        Command::Support { file } => support(ctx, file, &read(file)?),
        Command::Quotient { file, normal } => quotient(ctx, file, &read(file)?, normal),
        Command::Collide { file, merge } => collide(ctx, file, &read(file)?, merge[0], merge[1]),
        Command::DihedralAnalyze { file } => dihedral_analyze(ctx, file, &read(file)?),
        Command::HurwitzOrbits { file, max_orbit, max_group } => {
            hurwitz_orbits(ctx, file, &read(file)?, *max_orbit, *max_group)
        }
        Command::CharTable { file } => char_table(ctx, file, &read(file)?),
    }
}
