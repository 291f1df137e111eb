use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use veriblock::cli::{cmd_run_experiment, cmd_run_scenario, cmd_verify_chain, RunScenarioArgs};
use veriblock::sim::{ScenarioKind, DEFAULT_SEED};

#[derive(Parser)]
#[command(name = "veriblock", version, about = "Blockchain-backed incident reports, reviews and trust scores")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one seeded scenario and write its chain, evidence and scores.
    RunScenario {
        #[arg(long)]
        config: Option<PathBuf>,
        /// all-supporting, all-opposing or random-split
        #[arg(long, default_value = "random-split")]
        kind: ScenarioKind,
        /// Number of reviews to submit.
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Run the incremental-evidence sweep from the config.
    RunExperiment {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Overrides the configured seed list with a single seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Check a chain dump. Exits 1 and prints the first bad height if corrupt.
    VerifyChain { dump: PathBuf },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { veriblock::cli::EXIT_CONFIG } else { 0 });
        }
    };
    let env = std::env::vars();
    let code = match cli.command {
        Command::RunScenario { config, kind, n, seed, out } => {
            let args = RunScenarioArgs { config, kind, n, seed, out };
            cmd_run_scenario(&args, env, &mut std::io::stderr())
        }
        Command::RunExperiment { config, seed, out } => cmd_run_experiment(config.as_deref(), &out, seed, env, &mut std::io::stderr()),
        Command::VerifyChain { dump } => cmd_verify_chain(&dump, &mut std::io::stdout()),
    };
    ExitCode::from(code)
}
