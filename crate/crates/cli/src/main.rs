use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod report;

#[derive(Parser, Debug)]
#[command(name = "genfac", version, about = "Exact General Factor counting, gadgets and reductions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Size profile by tree decomposition dynamic programming
    CountTw(TwArgs),
    /// Size profile by linear layout dynamic programming
    CountCutw(CutwArgs),
    /// Size profile by exhaustive enumeration
    Oracle(OracleArgs),
    /// Profile plus whether any solution exists
    Decide(SolveArgs),
    /// Profile plus the smallest solution size
    Min(SolveArgs),
    /// Profile plus the largest solution size
    Max(SolveArgs),
    /// Build or verify realization gadgets
    #[command(subcommand)]
    Gadget(GadgetCommand),
    /// Reductions from CNF formulas
    #[command(subcommand)]
    Reduce(ReduceCommand),
    /// Naive vs fast timing table (TSV)
    Bench(BenchArgs),
    /// Check decomposition and layout certificates against an instance
    Validate(ValidateArgs),
}

#[derive(Args, Debug)]
struct TwArgs {
    #[arg(long)]
    instance: PathBuf,
    /// PACE `.td` file; min-fill heuristic when absent
    #[arg(long)]
    td: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = JoinArg::Fast)]
    join: JoinArg,
    /// Cap on dense fast-join cells
    #[arg(long, env = "GENFAC_MEM_BUDGET")]
    mem_budget: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Debug)]
struct CutwArgs {
    #[arg(long)]
    instance: PathBuf,
    /// Layout file; greedy heuristic when absent
    #[arg(long)]
    layout: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = StepArg::Improved)]
    step: StepArg,
    /// Largest cut the solver accepts
    #[arg(long, default_value_t = genfac::solver_cutw::DEFAULT_CUT_GUARD)]
    guard: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[arg(long)]
    instance: PathBuf,
    /// Backtracking search instead of Gray-code enumeration
    #[arg(long)]
    backtrack: bool,
    /// Largest edge count for enumeration
    #[arg(long, default_value_t = genfac::oracle::DEFAULT_EDGE_BUDGET)]
    max_edges: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, value_enum, default_value_t = SolverArg::Tw)]
    solver: SolverArg,
    #[arg(long)]
    td: Option<PathBuf>,
    #[arg(long)]
    layout: Option<PathBuf>,
    /// Join used by the `tw` solver
    #[arg(long, value_enum, default_value_t = JoinArg::Naive)]
    join: JoinArg,
    #[arg(long, env = "GENFAC_MEM_BUDGET")]
    mem_budget: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Subcommand, Debug)]
enum GadgetCommand {
    /// Write a gadget file
    Build(GadgetBuildArgs),
    /// Check a gadget file against a relation
    Verify(GadgetVerifyArgs),
}

#[derive(Args, Debug)]
struct GadgetBuildArgs {
    /// Degree list, e.g. `1,4`
    #[arg(long)]
    list: String,
    /// `hw22`, `eq:K`, `hw1:K`, `hw1:K+L`, `rel:ARITY:HEX,...`,
    /// `hw22-penalized` or `eq-penalized`
    #[arg(long)]
    relation: String,
    /// Penalty for the penalized constructions
    #[arg(long, default_value_t = 3)]
    beta: usize,
    /// Seed for the high-girth graph search
    #[arg(long)]
    seed: Option<u64>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GadgetVerifyArgs {
    #[arg(long)]
    gadget: PathBuf,
    /// Target relation, same syntax as `gadget build`
    #[arg(long)]
    relation: String,
}

#[derive(Subcommand, Debug)]
enum ReduceCommand {
    /// DIMACS CNF to a relation grid, optionally to a homogeneous instance
    Cnf(ReduceArgs),
}

#[derive(Args, Debug)]
struct ReduceArgs {
    #[arg(long)]
    cnf: PathBuf,
    #[arg(long)]
    out_dir: PathBuf,
    /// Replace relation vertices by gadgets over this list, e.g. `1,4`
    #[arg(long)]
    list: Option<String>,
    /// Also write a heuristic tree decomposition of every emitted instance
    #[arg(long)]
    td: bool,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[arg(required = true)]
    instances: Vec<PathBuf>,
    /// Runs per mode; the fastest is reported
    #[arg(long, default_value_t = 1)]
    repeat: usize,
    #[arg(long, env = "GENFAC_MEM_BUDGET")]
    mem_budget: Option<u64>,
}

#[derive(Args, Debug)]
struct ValidateArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    td: Option<PathBuf>,
    #[arg(long)]
    layout: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum JoinArg {
    Naive,
    Fast,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum StepArg {
    Naive,
    Improved,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum SolverArg {
    Tw,
    Cutw,
    Oracle,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Tsv,
}

/// 1 for unreadable input, 2 for violated preconditions and guards, 3 for
/// internal failures.
fn exit_code(err: &anyhow::Error) -> u8 {
    if let Some(e) = err.downcast_ref::<genfac::Error>() {
        return match e {
            genfac::Error::Parse { .. } => 1,
            genfac::Error::Internal(_) => 3,
            _ => 2,
        };
    }
    if err.downcast_ref::<std::io::Error>().is_some() {
        return 1;
    }
    2
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
