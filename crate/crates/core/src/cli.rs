//! Implementations of the `run-scenario`, `run-experiment` and
//! `verify-chain` commands. The binary only parses arguments and forwards
//! here.
//!
//! Exit codes: 0 success, 1 chain corruption detected, 2 configuration or
//! argument error, 3 I/O error or unreadable dump.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

use crate::config::{Config, ConfigError};
use crate::ledger::{debug_export, parse_dump, ChainFault};
use crate::sim::{generate_scenario, run_incremental_experiment, run_scenario, ScenarioKind, ScenarioSpec, SimError};

pub const EXIT_OK: u8 = 0;
pub const EXIT_CORRUPT: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_IO: u8 = 3;

pub const CHAIN_DUMP_FILE: &str = "chain.bin";
pub const CHAIN_DEBUG_FILE: &str = "chain.jsonl";
pub const EVIDENCE_FILE: &str = "evidence.csv";
pub const BALANCES_FILE: &str = "balances.csv";
pub const SCORES_FILE: &str = "scores.json";
pub const SUMMARY_FILE: &str = "summary.csv";

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Sim(#[from] SimError),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(ConfigError::Io { .. }) | CliError::Io { .. } => EXIT_IO,
            CliError::Config(_) | CliError::Sim(_) => EXIT_CONFIG,
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_owned(),
        source,
    }
}

fn write_file(path: &Path, contents: impl AsRef<[u8]>) -> Result<(), CliError> {
    fs::write(path, contents).map_err(io_err(path))
}

fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(io_err(dir))
}

/// Loads `path` if given, otherwise starts from defaults; environment
/// overrides apply either way.
pub fn load_config<I>(path: Option<&Path>, env: I) -> Result<Config, ConfigError>
where
    I: IntoIterator<Item = (String, String)>,
{
    match path {
        Some(p) => Config::load(p, env),
        None => Config::from_toml_str("", env),
    }
}

fn finish(result: Result<(), CliError>, diag: &mut dyn Write) -> u8 {
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(diag, "error: {e}");
            e.exit_code()
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunScenarioArgs {
    pub config: Option<PathBuf>,
    pub kind: ScenarioKind,
    pub n: usize,
    pub seed: u64,
    pub out: PathBuf,
}

#[derive(Debug, Serialize)]
struct ScenarioReport<'a> {
    kind: ScenarioKind,
    n: usize,
    seed: u64,
    incident_id: u64,
    scores: Vec<ScoreLine<'a>>,
}

#[derive(Debug, Serialize)]
struct ScoreLine<'a> {
    algorithm: &'a str,
    score: f64,
    trusted: bool,
    total: u64,
    verified: u64,
}

/// Runs one scenario end to end and writes the chain dump, its JSON-lines
/// debug export, the evidence CSV, balances and `scores.json` into `out`.
pub fn cmd_run_scenario<I>(args: &RunScenarioArgs, env: I, diag: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = (String, String)>,
{
    let result = (|| {
        let config = load_config(args.config.as_deref(), env)?;
        let spec = ScenarioSpec {
            kind: args.kind,
            n_transactions: args.n,
            seed: args.seed,
            geometry: config.geometry(),
            p_pass_filter: config.experiment.p_pass_filter,
        };
        let calls = generate_scenario(&spec)?;
        let run = run_scenario(&calls, &config.sim_settings())?;

        ensure_dir(&args.out)?;
        let blocks = run.node.ledger().blocks();
        write_file(&args.out.join(CHAIN_DUMP_FILE), run.node.ledger().to_dump())?;
        write_file(&args.out.join(CHAIN_DEBUG_FILE), debug_export(blocks))?;
        write_file(&args.out.join(EVIDENCE_FILE), run.evidence.export_csv())?;
        write_file(&args.out.join(BALANCES_FILE), run.node.state().balances_csv())?;
        let report = ScenarioReport {
            kind: args.kind,
            n: args.n,
            seed: args.seed,
            incident_id: run.incident_id.0,
            scores: run
                .records
                .iter()
                .map(|r| ScoreLine {
                    algorithm: &r.algorithm_id,
                    score: r.score,
                    trusted: r.trusted,
                    total: r.total_reviews,
                    verified: r.verified_feedback,
                })
                .collect(),
        };
        let mut json = serde_json::to_string_pretty(&report).expect("report serializes");
        json.push('\n');
        write_file(&args.out.join(SCORES_FILE), json)
    })();
    finish(result, diag)
}

/// `series_p<percent>_s<seed>.csv`
pub fn series_file_name(p_good: f64, seed: u64) -> String {
    format!("series_p{}_s{}.csv", (p_good * 100.0).round() as i64, seed)
}

/// Runs every (p_good, seed) cell of the configured sweep, writing one
/// series CSV per cell and `summary.csv` with the final row of each.
pub fn cmd_run_experiment<I>(config_path: Option<&Path>, out_dir: &Path, seed: Option<u64>, env: I, diag: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = (String, String)>,
{
    let result = (|| {
        let config = load_config(config_path, env)?;
        let seeds = match seed {
            Some(s) => vec![s],
            None => config.experiment.seeds.clone(),
        };
        ensure_dir(out_dir)?;
        let mut summary = csv::Writer::from_writer(Vec::new());
        summary
            .write_record(["p_good", "seed", "n", "alg1", "alg2", "alg3"])
            .expect("in-memory write");
        for &p in &config.experiment.p_good {
            for &s in &seeds {
                let series = run_incremental_experiment(p, &config.experiment_config(s))?;
                write_file(&out_dir.join(series_file_name(p, s)), series.to_csv())?;
                let last = series.last().expect("total > 0 gives at least one row");
                summary
                    .write_record([
                        p.to_string(),
                        s.to_string(),
                        last.n.to_string(),
                        last.alg1.to_string(),
                        last.alg2.to_string(),
                        last.alg3.to_string(),
                    ])
                    .expect("in-memory write");
            }
        }
        write_file(&out_dir.join(SUMMARY_FILE), summary.into_inner().expect("flush"))
    })();
    finish(result, diag)
}

/// Outcome of checking a chain dump.
#[derive(Debug, PartialEq)]
pub enum DumpVerdict {
    Intact { blocks: usize },
    Corrupt(ChainFault),
    Unreadable(String),
}

impl DumpVerdict {
    pub fn exit_code(&self) -> u8 {
        match self {
            DumpVerdict::Intact { .. } => EXIT_OK,
            DumpVerdict::Corrupt(_) => EXIT_CORRUPT,
            DumpVerdict::Unreadable(_) => EXIT_IO,
        }
    }
}

pub fn check_dump(bytes: &[u8]) -> DumpVerdict {
    let parsed = match parse_dump(bytes) {
        Ok(p) if !p.blocks.is_empty() => p,
        Ok(_) => return DumpVerdict::Unreadable("dump holds no blocks".into()),
        Err(e) => return DumpVerdict::Unreadable(e.to_string()),
    };
    match parsed.verify() {
        Ok(blocks) => DumpVerdict::Intact { blocks: blocks.len() },
        Err(fault) => DumpVerdict::Corrupt(fault),
    }
}

/// Verifies a canonical chain dump. Prints the first bad height on
/// corruption.
pub fn cmd_verify_chain(dump_path: &Path, out: &mut dyn Write) -> u8 {
    let verdict = match fs::read(dump_path) {
        Ok(bytes) => check_dump(&bytes),
        Err(e) => DumpVerdict::Unreadable(format!("{}: {e}", dump_path.display())),
    };
    let _ = match &verdict {
        DumpVerdict::Intact { blocks } => writeln!(out, "ok: {blocks} blocks verified"),
        DumpVerdict::Corrupt(fault) => writeln!(
            out,
            "corrupt: first bad height {} ({fault})",
            fault.height().map_or_else(|| "-".to_string(), |h| h.to_string())
        ),
        DumpVerdict::Unreadable(msg) => writeln!(out, "error: unreadable dump: {msg}"),
    };
    verdict.exit_code()
}
