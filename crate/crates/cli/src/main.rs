use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ripa_core::bench::{format_summary, load_config_file, RunOverrides};
use ripa_core::{registry, run_case, table1, RipaError, RunConfig, SchemeKind, Variant};

#[derive(Parser)]
#[command(name = "ripa", about = "Finite-volume benchmarks for the Ripa system")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one case and write its snapshots, budgets and error tables.
    Run(RunArgs),
    /// Run the three steady-state cases with both schemes and tabulate L1 errors.
    Table1 {
        #[arg(long)]
        out: PathBuf,
    },
    /// List the registered cases.
    ListCases,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    case: Option<String>,
    /// wb or rusanov
    #[arg(long, value_parser = parse_scheme)]
    scheme: Option<SchemeKind>,
    /// centred or upwind
    #[arg(long, value_parser = parse_variant)]
    variant: Option<Variant>,
    #[arg(long)]
    nx: Option<usize>,
    #[arg(long)]
    ny: Option<usize>,
    #[arg(long)]
    tend: Option<f64>,
    #[arg(long)]
    cfl: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    fixed_dt: Option<f64>,
    /// key = value file; command-line flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_scheme(s: &str) -> Result<SchemeKind, String> {
    s.parse().map_err(|e: RipaError| e.to_string())
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    s.parse().map_err(|e: RipaError| e.to_string())
}

fn exit_code(err: &RipaError) -> u8 {
    if err.is_solver_failure() {
        3
    } else if matches!(err, RipaError::Io(_)) {
        1
    } else {
        2
    }
}

fn run(args: RunArgs) -> Result<(), RipaError> {
    let cli = RunOverrides {
        case: args.case,
        scheme: args.scheme,
        variant: args.variant,
        nx: args.nx,
        ny: args.ny,
        t_end: args.tend,
        cfl: args.cfl,
        alpha: args.alpha,
        beta: args.beta,
        fixed_dt: args.fixed_dt,
        out: args.out,
    };
    let merged = match &args.config {
        Some(path) => cli.or(load_config_file(path)?),
        None => cli,
    };
    let config = RunConfig::from_overrides(merged)?;
    let summary = run_case(&config)?;
    print!("{}", format_summary(&summary));
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Run(args) => run(args),
        Command::Table1 { out } => table1(&out).map(|t| print!("{}", t.to_text())),
        Command::ListCases => {
            for c in registry() {
                println!(
                    "{:<24} {}D  {:>4} cells  T = {:<5} {}",
                    c.name, c.dim, c.n_cells, c.t_end, c.description
                );
            }
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
