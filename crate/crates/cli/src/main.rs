use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

mod commands;
mod views;

use sopfault::{parse, parse_sop_file, OracleLimits, SopExpr, DEFAULT_MAX_VARS};

/// Stuck-at fault dictionaries and diagnosing-tree test minimization for
/// two-level sum-of-products circuits.
///
/// INPUT is either a path to a `.sop` file or an inline expression such as
/// "ab' + c". Variables are single lowercase letters; `'` complements.
#[derive(Debug, Parser)]
#[command(name = "sopfault", version)]
pub struct Cli {
    /// Output format; each subcommand has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Maximum number of input variables (the dictionary holds 2^max-vars rows).
    #[arg(long, global = true, env = "SOPFAULT_MAX_VARS", default_value_t = DEFAULT_MAX_VARS)]
    max_vars: usize,

    /// Write output to this file instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    /// Worker threads for fault simulation and bench (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
    Dot,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fault dictionary: inputs, fault-free output and one column per fault class (csv | json).
    Dict { input: String },
    /// Enumerated faults grouped into equivalence classes (json | text).
    Faults { input: String },
    /// Minimized diagnostic test set and statistics (json | text).
    Minimize {
        input: String,
        /// Include the pipeline's wall-clock time (makes output run-dependent).
        #[arg(long)]
        timing: bool,
    },
    /// Diagnosing tree (dot | text).
    Tree { input: String },
    /// Walk the diagnosing tree against a circuit with one injected fault (text | json).
    Simulate {
        input: String,
        /// Fault id from `faults`, or NONE for the fault-free circuit.
        #[arg(long, default_value = "NONE")]
        fault: String,
    },
    /// Compare the heuristic test set with the exact minimum (text | json).
    Verify {
        input: String,
        #[arg(long, default_value_t = OracleLimits::default().max_rows)]
        oracle_max_rows: usize,
        #[arg(long, default_value_t = OracleLimits::default().max_columns)]
        oracle_max_columns: usize,
        #[arg(long, default_value_t = OracleLimits::default().max_subset_size)]
        oracle_max_subset: usize,
    },
    /// Generate a random SOP expression from a seed.
    Gen {
        #[arg(long)]
        seed: u64,
        /// Number of variables to draw from (a, b, c, ...).
        #[arg(long)]
        vars: usize,
        #[arg(long)]
        terms: usize,
        #[arg(long, default_value_t = 1)]
        min_literals: usize,
        #[arg(long, default_value_t = 3)]
        max_literals: usize,
    },
    /// Run `minimize` on every `.sop` file in a directory and print a CSV table.
    Bench { dir: PathBuf },
}

pub struct Ctx {
    pub format: Option<Format>,
    pub max_vars: usize,
}

impl Ctx {
    pub fn format_or(&self, default: Format, allowed: &[Format]) -> Result<Format> {
        let f = self.format.unwrap_or(default);
        if !allowed.contains(&f) {
            bail!(
                "format {:?} not supported here (expected one of {:?})",
                f,
                allowed
            );
        }
        Ok(f)
    }

    pub fn row_cap(&self) -> usize {
        1usize << self.max_vars.min(usize::BITS as usize - 2)
    }

    pub fn load(&self, input: &str) -> Result<SopExpr> {
        let path = Path::new(input);
        let expr = if path.is_file() {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            parse_sop_file(&text, self.max_vars).with_context(|| format!("parsing {}", path.display()))?
        } else {
            parse(input, self.max_vars).with_context(|| format!("parsing {input:?}"))?
        };
        Ok(expr)
    }
}

fn run(cli: Cli) -> Result<(String, bool)> {
    if cli.jobs > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs)
            .build_global()
            .map_err(|e| anyhow!("configuring thread pool: {e}"))?;
    }
    let ctx = Ctx {
        format: cli.format,
        max_vars: cli.max_vars,
    };
    match cli.command {
        Command::Dict { input } => commands::dict(&ctx, &input),
        Command::Faults { input } => commands::faults(&ctx, &input),
        Command::Minimize { input, timing } => commands::minimize(&ctx, &input, timing),
        Command::Tree { input } => commands::tree(&ctx, &input),
        Command::Simulate { input, fault } => commands::simulate(&ctx, &input, &fault),
        Command::Verify {
            input,
            oracle_max_rows,
            oracle_max_columns,
            oracle_max_subset,
        } => commands::verify(
            &ctx,
            &input,
            OracleLimits {
                max_rows: oracle_max_rows,
                max_columns: oracle_max_columns,
                max_subset_size: oracle_max_subset,
            },
        ),
        Command::Gen {
            seed,
            vars,
            terms,
            min_literals,
            max_literals,
        } => commands::gen(&ctx, seed, vars, terms, min_literals, max_literals),
        Command::Bench { dir } => commands::bench(&ctx, &dir),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = cli.output.clone();
    match run(cli) {
        Ok((text, ok)) => {
            let written = match &output {
                Some(path) => fs::write(path, &text).with_context(|| format!("writing {}", path.display())),
                None => io::stdout().write_all(text.as_bytes()).context("writing stdout"),
            };
            if let Err(e) = written {
                eprintln!("error: {e:#}");
                return ExitCode::FAILURE;
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
