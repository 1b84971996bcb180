use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qubonet_core::anneal::AnnealParams;
use qubonet_core::constraint::ConstraintSpec;
use qubonet_cli::commands::{self, ModelFormat};
use qubonet_cli::formats::{read_spec_file, SpecFile};
use qubonet_cli::sweep::{self, Method, SizeRange};
use qubonet_cli::CliError;

/// Sparse QUBO formulations for equality and inequality cardinality
/// constraints, via network-based constraint decomposition.
#[derive(Parser)]
#[command(name = "qubonet", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a model and write it as json, qubo text, or an edge list
    Build(BuildArgs),
    /// Exhaustively verify that a network encodes its constraint (n <= 20),
    /// or validate a model file
    Verify(VerifyArgs),
    /// Variable/edge/degree counts of a model
    Stats(SpecMethodArgs),
    /// Dump the decomposition network as JSON
    Inspect(SpecMethodArgs),
    /// CSV sweep of model size against problem size N
    SweepSize(SweepSizeArgs),
    /// CSV sweep of model size against the target value K (equality on N variables)
    SweepTarget(SweepTargetArgs),
    /// Sample the model with simulated annealing
    Solve(SolveArgs),
    /// Re-render a model JSON file in another format
    Export(ExportArgs),
}

#[derive(Args)]
struct SpecArgs {
    /// Constraint kind: one-hot|equality|at-most|at-least|range
    #[arg(long)]
    kind: Option<String>,
    /// Number of constrained variables
    #[arg(long)]
    n: Option<usize>,
    /// Target bound for equality/at-most/at-least
    #[arg(long)]
    k: Option<usize>,
    /// Lower bound for range
    #[arg(long)]
    k1: Option<usize>,
    /// Upper bound for range
    #[arg(long)]
    k2: Option<usize>,
    /// Read the constraint from a spec JSON file instead of flags
    #[arg(long, value_name = "FILE", conflicts_with_all = ["kind", "n", "k", "k1", "k2"])]
    spec: Option<PathBuf>,
}

impl SpecArgs {
    fn resolve(&self) -> Result<ConstraintSpec, CliError> {
        if let Some(path) = &self.spec {
            return read_spec_file(&read_text(path)?);
        }
        let kind = self
            .kind
            .clone()
            .ok_or_else(|| CliError::invalid("missing --kind (or --spec FILE)".into()))?;
        let n = self.n.ok_or_else(|| CliError::invalid("missing --n".into()))?;
        SpecFile { kind, n, k: self.k, k1: self.k1, k2: self.k2 }.to_spec()
    }
}

#[derive(Args)]
struct SpecMethodArgs {
    #[command(flatten)]
    spec: SpecArgs,
    /// Network construction: clique|full|depth=d|optimized
    #[arg(long, default_value = "full")]
    method: Method,
}

#[derive(Args)]
struct BuildArgs {
    #[command(flatten)]
    spec: SpecArgs,
    #[arg(long, default_value = "full")]
    method: Method,
    /// Penalty scale applied to every sub-constraint
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    /// Output file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format
    #[arg(long, default_value = "json")]
    format: ModelFormat,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    spec: SpecArgs,
    #[arg(long, default_value = "full")]
    method: Method,
    /// Validate a model JSON file instead of sweeping a spec
    #[arg(long, value_name = "FILE", conflicts_with_all = ["kind", "n", "k", "k1", "k2", "spec", "method"])]
    model: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepSizeArgs {
    /// Constraint kind to sweep
    #[arg(long)]
    kind: String,
    /// Inclusive size range start:end:step
    #[arg(long, value_name = "START:END:STEP")]
    n_range: SizeRange,
    /// Comma-separated methods
    #[arg(long, value_delimiter = ',', default_value = "clique,full")]
    methods: Vec<Method>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepTargetArgs {
    /// Number of variables of the equality constraint
    #[arg(long, default_value_t = 128)]
    n: usize,
    /// Comma-separated methods
    #[arg(long, value_delimiter = ',', default_value = "clique,full,optimized")]
    methods: Vec<Method>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    spec: SpecArgs,
    #[arg(long, default_value = "full")]
    method: Method,
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    /// Number of independent annealer reads
    #[arg(long, default_value_t = 1000)]
    reads: usize,
    /// Metropolis sweeps per read
    #[arg(long, default_value_t = 2000)]
    sweeps: usize,
    /// Initial inverse temperature of the geometric schedule
    #[arg(long, default_value_t = 0.1)]
    beta_start: f64,
    /// Final inverse temperature
    #[arg(long, default_value_t = 10.0)]
    beta_end: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExportArgs {
    /// Input model JSON file
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    #[arg(long)]
    format: ModelFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, content)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(content.as_bytes())
                .and_then(|()| stdout.flush())
                .map_err(|e| CliError::Io(format!("stdout: {e}")))
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Build(args) => {
            let spec = args.spec.resolve()?;
            let content = commands::build(&spec, args.method, args.lambda, args.format)?;
            emit(args.out.as_ref(), &content)
        }
        Command::Verify(args) => {
            if let Some(path) = &args.model {
                let content = commands::verify_model(&read_text(path)?)?;
                return emit(args.out.as_ref(), &content);
            }
            let spec = args.spec.resolve()?;
            let (content, exact) = commands::verify_spec(&spec, args.method)?;
            emit(args.out.as_ref(), &content)?;
            if exact {
                Ok(())
            } else {
                Err(CliError::Verification(format!("{spec}: network is not exact")))
            }
        }
        Command::Stats(args) => {
            let spec = args.spec.resolve()?;
            let content = commands::stats(&spec, args.method)?;
            emit(None, &content)
        }
        Command::Inspect(args) => {
            let spec = args.spec.resolve()?;
            let content = commands::inspect(&spec, args.method)?;
            emit(None, &content)
        }
        Command::SweepSize(args) => {
            let content = sweep::sweep_size(&args.kind, args.n_range, &args.methods)?;
            emit(args.out.as_ref(), &content)
        }
        Command::SweepTarget(args) => {
            let content = sweep::sweep_target(args.n, &args.methods)?;
            emit(args.out.as_ref(), &content)
        }
        Command::Solve(args) => {
            let spec = args.spec.resolve()?;
            let params = AnnealParams {
                num_reads: args.reads,
                sweeps: args.sweeps,
                beta_start: args.beta_start,
                beta_end: args.beta_end,
                seed: args.seed,
            };
            let content = commands::solve(&spec, args.method, args.lambda, params)?;
            emit(args.out.as_ref(), &content)
        }
        Command::Export(args) => {
            let content = commands::export(&read_text(&args.input)?, args.format)?;
            emit(args.out.as_ref(), &content)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
