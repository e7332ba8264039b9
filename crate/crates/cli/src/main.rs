//! `uag`: solve systems over finite algebras, inspect algebras of term
//! functions, decompose algebraic sets and check membership criteria.
//!
//! Exit codes: 0 success, 1 I/O or configuration, 2 parse, 3 capacity,
//! 4 unresolved name, 5 precondition violated.

mod commands;
mod config;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{Format, RunConfig};
use report::CliError;

#[derive(Debug, Parser)]
#[command(name = "uag", version, about = "Algebraic sets over finite algebras")]
struct Cli {
    /// TOML file with default settings.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads for point sweeps and closure tests.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true)]
    max_carrier: Option<u64>,
    #[arg(long, global = true)]
    max_points: Option<u64>,
    #[arg(long, global = true)]
    max_closure: Option<u64>,
    /// Term depth bound for inconsistent-system searches.
    #[arg(long, global = true)]
    witness_depth: Option<u32>,
    /// Seed for randomized checks.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Also write the JSON result to this file.
    #[arg(short = 'o', long = "output", global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
pub struct SetArgs {
    /// DSL files, loaded in order.
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
    #[arg(long, short = 'a')]
    pub algebra: String,
    #[arg(long, short = 's')]
    pub system: String,
}

#[derive(Debug, Args)]
pub struct PairArgs {
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
    #[arg(long, short = 'a')]
    pub algebra: String,
    /// System defining the source set.
    #[arg(long)]
    pub source: String,
    /// System defining the target set.
    #[arg(long)]
    pub target: String,
}

#[derive(Debug, Args)]
pub struct CandidateArgs {
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
    /// The algebra `A`.
    #[arg(long, short = 'a')]
    pub algebra: String,
    /// The algebra `C` under test.
    #[arg(long, short = 'c')]
    pub candidate: String,
    /// Generators of `C`, comma separated; a greedy generating set by default.
    #[arg(long, value_delimiter = ',')]
    pub generators: Option<Vec<u32>>,
}

#[derive(Debug, Args)]
pub struct AlgebraArgs {
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
    #[arg(long, short = 'a')]
    pub algebra: String,
}

#[derive(Debug, Subcommand)]
pub enum CheckCommand {
    /// Is C the algebra of term functions of an algebraic set over A?
    Coord(CandidateArgs),
    /// ... of an irreducible algebraic set?
    IrrCoord(CandidateArgs),
    /// Does C satisfy every quasi-identity of A?
    Qvar(CandidateArgs),
    /// Is the empty set algebraic over A?
    EmptySet(AlgebraArgs),
    /// Does the one-element algebra satisfy the universal theory of A?
    TrivialUcl(AlgebraArgs),
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// The solution set of a system.
    Solve(SetArgs),
    /// The algebra of term functions on a solution set.
    Gamma(SetArgs),
    /// Irreducible components of a solution set.
    Decompose {
        #[command(flatten)]
        set: SetArgs,
        /// Recompute with this many seeded shuffles of the point order.
        #[arg(long, default_value_t = 0)]
        shuffles: usize,
    },
    /// An irredundant equivalent subsystem.
    Reduce(SetArgs),
    /// Is `t = s` true at every solution?
    RadicalMember {
        #[command(flatten)]
        set: SetArgs,
        #[arg(long, short = 'e')]
        equation: String,
    },
    /// Does `t = s` follow from the system by congruence rules alone?
    ClosureMember {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long, short = 's')]
        system: String,
        #[arg(long, short = 'e')]
        equation: String,
    },
    /// Decision procedures with evidence.
    #[command(subcommand)]
    Check(CheckCommand),
    /// Term maps between two solution sets against homomorphisms between
    /// their algebras of term functions.
    Duality(PairArgs),
    /// Are two solution sets isomorphic via term maps?
    Isomorphic(PairArgs),
}

fn settings(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path).map_err(CliError::Config)?,
        None => RunConfig::default(),
    };
    if let Some(f) = cli.format {
        cfg.format = f;
    }
    if let Some(t) = cli.threads {
        cfg.threads = t;
    }
    if let Some(v) = cli.max_carrier {
        cfg.max_carrier = v;
    }
    if let Some(v) = cli.max_points {
        cfg.max_points = v;
    }
    if let Some(v) = cli.max_closure {
        cfg.max_closure = v;
    }
    if let Some(v) = cli.witness_depth {
        cfg.witness_depth = v;
    }
    if let Some(v) = cli.seed {
        cfg.seed = v;
    }
    cfg.validate().map_err(CliError::Config)?;
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let cfg = settings(cli)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| CliError::Config(e.to_string()))?;
    let report = pool.install(|| commands::dispatch(&cli.command, &cfg))?;
    if let Some(path) = &cli.output {
        std::fs::write(path, format!("{}\n", report.json)).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    let body = match cfg.format {
        Format::Json => &report.json,
        Format::Text => &report.text,
    };
    let mut out = std::io::stdout().lock();
    writeln!(out, "{}", body.trim_end()).map_err(|e| CliError::Io(e.to_string()))?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
