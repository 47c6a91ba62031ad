use std::path::PathBuf;
use std::process::ExitCode;

use clap::{CommandFactory, FromArgMatches, Parser};

use evoniche_cli::{config, effective_map, runner};

/// Reproducible evolutionary-optimization experiments: genetic
/// algorithms, differential evolution, crowding DE with locality, and
/// species-conserving search over benchmark functions and HP-lattice
/// protein folding.
#[derive(Parser, Debug)]
#[command(name = "evoniche", version)]
struct Cli {
    /// Configuration file: key=value lines or a JSON object.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override: base random seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override: algorithm id (see configuration keys below).
    #[arg(long)]
    algorithm: Option<String>,
    /// Override: problem id, bench:<name> or hp:<path>.
    #[arg(long)]
    problem: Option<String>,
    /// Override: evaluation budget (sets termination=evals:N).
    #[arg(long)]
    budget: Option<u64>,
    /// Override: output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let matches = Cli::command()
        .after_help(config::keys_help())
        .get_matches();
    let cli = Cli::from_arg_matches(&matches).expect("matches come from Cli::command");

    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let overrides = [
        ("seed", cli.seed.map(|s| s.to_string())),
        ("algorithm", cli.algorithm),
        ("problem", cli.problem),
        ("budget", cli.budget.map(|b| b.to_string())),
        ("out", cli.out.map(|p| p.display().to_string())),
    ];
    let map = effective_map(cli.config.as_deref(), &overrides)?;
    let (spec, warnings) = config::build_spec(&map)?;
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    let artifacts = runner::run_experiment(&spec)?;
    eprintln!("wrote {}", artifacts.csv_path.display());
    eprintln!("wrote {}", artifacts.summary_path.display());
    if let Some(p) = artifacts.conformation_path {
        eprintln!("wrote {}", p.display());
    }
    Ok(())
}
