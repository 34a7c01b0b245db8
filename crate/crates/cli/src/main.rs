use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use contlog::textio::Report;

mod commands;
mod inputs;

use inputs::InputError;

#[derive(Parser, Debug)]
#[command(
    name = "contlog",
    version,
    about = "Exact computation on finite [0,1]-valued structures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a formula in a structure
    Eval(Common),
    /// Check that every sentence of a theory evaluates to 0
    CheckModel(Common),
    /// Quotient a structure by Leibniz equality
    Reduce(Common),
    /// Search the bounded formula family for a sentence separating two structures
    Distinguish(Common),
    /// Build the ultraproduct of the given structures along a principal ultrafilter
    Ultraproduct(Common),
    /// Verify Łoś's law exhaustively over a generated formula family
    LosCheck(Common),
    /// Synthesize the distance predicate and moduli for a vocabulary
    Expand(Common),
    /// Check pseudo-metric axioms, moduli and metric axioms for a distance
    MetricCheck(Common),
    /// Apply the forced-convergence transform to a formula sequence
    ForceConverge(Common),
    /// Turn every entry of a distance sequence into a pseudo-metric
    Pseudometrize(Common),
    /// Replace atomic formulas by new predicate symbols up to a term depth
    Morleyize(Common),
    /// Check the monotonicity, disjointness and covering conditions
    InterpretCheck(Common),
    /// Build the [0,1]-valued structure from a positive interpretation
    InterpretUpgrade(Common),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StepSchedule {
    Lemma,
    Stability,
}

#[derive(Args, Debug, Default)]
pub struct Common {
    /// Structure file (.cmls); repeat for commands taking several
    #[arg(long)]
    structure: Vec<PathBuf>,
    /// Vocabulary file (.cmlv)
    #[arg(long)]
    vocab: Option<PathBuf>,
    /// Formula text, or a path to a .cmlf file
    #[arg(long)]
    formula: Option<String>,
    /// Theory file (.cmlt)
    #[arg(long)]
    theory: Option<PathBuf>,
    /// Distance formula in x, y (text or .cmlf path)
    #[arg(long)]
    distance: Option<String>,
    /// Formula sequence file (.cmlq)
    #[arg(long)]
    sequence: Option<PathBuf>,
    /// Interpretation file (.cmli)
    #[arg(long)]
    interp: Option<PathBuf>,
    /// Signature JSON written by `expand`
    #[arg(long)]
    signature: Option<PathBuf>,
    /// Formula depth budget, or Morleyization term depth
    #[arg(long, default_value_t = 3)]
    depth: usize,
    /// Grid denominator, a power of two
    #[arg(long, default_value_t = 4)]
    grid: u64,
    #[arg(long, value_enum)]
    schedule: Option<StepSchedule>,
    /// Seed for generated structures
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of seeded random structures to check as well
    #[arg(long, default_value_t = 0)]
    count: usize,
    /// Largest universe for generated structures
    #[arg(long, default_value_t = 4)]
    size: usize,
    /// Tolerance for check-model, as p/q
    #[arg(long)]
    tolerance: Option<String>,
    /// Index of the principal ultrafilter (0-based); default: all of them
    #[arg(long)]
    principal: Option<usize>,
    /// Variable assignment `x=label`; repeatable
    #[arg(long)]
    assign: Vec<String>,
    /// Write the main output object (structure, sequence, ...) to this file
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the JSON report to this file
    #[arg(long)]
    json: Option<PathBuf>,
}

impl Command {
    fn parts(&self) -> (&'static str, &Common) {
        match self {
            Command::Eval(c) => ("eval", c),
            Command::CheckModel(c) => ("check-model", c),
            Command::Reduce(c) => ("reduce", c),
            Command::Distinguish(c) => ("distinguish", c),
            Command::Ultraproduct(c) => ("ultraproduct", c),
            Command::LosCheck(c) => ("los-check", c),
            Command::Expand(c) => ("expand", c),
            Command::MetricCheck(c) => ("metric-check", c),
            Command::ForceConverge(c) => ("force-converge", c),
            Command::Pseudometrize(c) => ("pseudometrize", c),
            Command::Morleyize(c) => ("morleyize", c),
            Command::InterpretCheck(c) => ("interpret-check", c),
            Command::InterpretUpgrade(c) => ("interpret-upgrade", c),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, args) = cli.command.parts();
    let report = match commands::run(name, args) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("contlog {name}: {e}");
            Report::error(name, error_value(&e))
        }
    };
    let text = report.to_json();
    // a closed pipe downstream is not our failure
    let _ = writeln!(std::io::stdout().lock(), "{text}");
    if let Some(path) = &args.json {
        if let Err(e) = std::fs::write(path, format!("{text}\n")) {
            eprintln!("contlog {name}: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    ExitCode::from(report.status.exit_code() as u8)
}

fn error_value(e: &InputError) -> serde_json::Value {
    match e {
        InputError::Diagnostic { path, diag } => serde_json::json!({
            "path": path,
            "code": diag.code.as_str(),
            "line": diag.line,
            "column": diag.column,
            "message": diag.message,
        }),
        other => serde_json::json!({ "message": other.to_string() }),
    }
}
