//! Single TOML configuration file, one section per module. Unknown keys are
//! rejected. Any key can be overridden from the environment as
//! `VERIBLOCK_<SECTION>_<KEY>`, e.g. `VERIBLOCK_TRUST_THRESHOLD=0.6`.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::contracts::{ContractConfig, DedupParams};
use crate::evidence::VerificationParams;
use crate::ledger::LedgerConfig;
use crate::sim::{ExperimentConfig, GeometrySpec, SimSettings, DEFAULT_SEED};
use crate::trust::{algorithm_by_id, Weights, DEFAULT_THRESHOLD};

pub const ENV_PREFIX: &str = "VERIBLOCK_";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("config parse error: {0}")]
    Parse(String),
    #[error("invalid config key `{key}`: {reason}")]
    Invalid { key: String, reason: String },
}

fn invalid(key: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        key: key.to_owned(),
        reason: reason.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LedgerSection {
    pub block_interval_s: u64,
    pub block_capacity: usize,
}

impl Default for LedgerSection {
    fn default() -> Self {
        let d = LedgerConfig::default();
        LedgerSection {
            block_interval_s: d.block_interval_s,
            block_capacity: d.block_capacity,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerificationSection {
    pub radius_m: f64,
    pub time_window_s: f64,
    pub heading_tol_deg: f64,
}

impl Default for VerificationSection {
    fn default() -> Self {
        let d = VerificationParams::default();
        VerificationSection {
            radius_m: d.radius,
            time_window_s: d.time_window,
            heading_tol_deg: d.heading_tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrustSection {
    pub threshold: f64,
    pub w_filtered: f64,
    pub w_unfiltered: f64,
    pub algorithms: Vec<String>,
}

impl Default for TrustSection {
    fn default() -> Self {
        let w = Weights::default();
        TrustSection {
            threshold: DEFAULT_THRESHOLD,
            w_filtered: w.filtered,
            w_unfiltered: w.unfiltered,
            algorithms: SimSettings::default().algorithms,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DedupSection {
    pub radius_m: f64,
    pub time_window_s: u64,
}

impl Default for DedupSection {
    fn default() -> Self {
        let d = DedupParams::default();
        DedupSection {
            radius_m: d.radius_m,
            time_window_s: d.time_window_s,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EscrowSection {
    pub refund_timeout_s: u64,
}

impl Default for EscrowSection {
    fn default() -> Self {
        EscrowSection {
            refund_timeout_s: ContractConfig::DEFAULT_REFUND_TIMEOUT_S,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentSection {
    pub p_good: Vec<f64>,
    pub total: usize,
    pub step: usize,
    pub seeds: Vec<u64>,
    pub p_pass_filter: f64,
}

impl Default for ExperimentSection {
    fn default() -> Self {
        ExperimentSection {
            p_good: vec![0.5, 0.6, 0.7, 0.8],
            total: 1000,
            step: 10,
            seeds: vec![DEFAULT_SEED],
            p_pass_filter: 0.7,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub ledger: LedgerSection,
    pub verification: VerificationSection,
    pub trust: TrustSection,
    pub dedup: DedupSection,
    pub escrow: EscrowSection,
    pub experiment: ExperimentSection,
}

impl Config {
    /// Reads `path`, applies environment overrides and validates.
    pub fn load<I>(path: &Path, env: I) -> Result<Config, ConfigError>
    where
        I: IntoIterator<Item = (String, String)>,
    {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml_str(&text, env)
    }

    pub fn from_toml_str<I>(text: &str, env: I) -> Result<Config, ConfigError>
    where
        I: IntoIterator<Item = (String, String)>,
    {
        let mut table: toml::Table = text.parse().map_err(|e: toml::de::Error| ConfigError::Parse(e.to_string()))?;
        apply_env(&mut table, env)?;
        let config: Config = table.try_into().map_err(|e: toml::de::Error| ConfigError::Parse(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.ledger.block_capacity == 0 {
            return Err(invalid("ledger.block_capacity", "must be > 0"));
        }
        self.verification_params()?;
        let t = &self.trust;
        if !(0.0..=1.0).contains(&t.threshold) {
            return Err(invalid("trust.threshold", "must be in [0, 1]"));
        }
        let weights = Weights::new(t.w_filtered, t.w_unfiltered).map_err(|e| invalid("trust.w_filtered", e.to_string()))?;
        if t.algorithms.is_empty() {
            return Err(invalid("trust.algorithms", "must list at least one algorithm"));
        }
        for id in &t.algorithms {
            algorithm_by_id(id, weights).map_err(|e| invalid("trust.algorithms", e.to_string()))?;
        }
        if !(self.dedup.radius_m >= 0.0 && self.dedup.radius_m.is_finite()) {
            return Err(invalid("dedup.radius_m", "must be finite and >= 0"));
        }
        let e = &self.experiment;
        if e.p_good.is_empty() {
            return Err(invalid("experiment.p_good", "must list at least one value"));
        }
        if let Some(p) = e.p_good.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(invalid("experiment.p_good", format!("{p} is not in [0, 1]")));
        }
        if e.total == 0 || e.step == 0 || !e.total.is_multiple_of(e.step) {
            return Err(invalid("experiment.step", format!("{} must be positive and divide total {}", e.step, e.total)));
        }
        if e.seeds.is_empty() {
            return Err(invalid("experiment.seeds", "must list at least one seed"));
        }
        if !(0.0..=1.0).contains(&e.p_pass_filter) {
            return Err(invalid("experiment.p_pass_filter", "must be in [0, 1]"));
        }
        Ok(())
    }

    pub fn verification_params(&self) -> Result<VerificationParams, ConfigError> {
        let v = &self.verification;
        VerificationParams::new(v.radius_m, v.time_window_s, v.heading_tol_deg).map_err(|e| {
            let key = match e {
                crate::evidence::ParamsError::Radius(_) => "verification.radius_m",
                crate::evidence::ParamsError::TimeWindow(_) => "verification.time_window_s",
                crate::evidence::ParamsError::HeadingTolerance(_) => "verification.heading_tol_deg",
            };
            invalid(key, e.to_string())
        })
    }

    /// Node and provider settings. Call on a validated config.
    pub fn sim_settings(&self) -> SimSettings {
        SimSettings {
            ledger: LedgerConfig {
                block_interval_s: self.ledger.block_interval_s,
                block_capacity: self.ledger.block_capacity,
            },
            contracts: ContractConfig::new(
                DedupParams {
                    radius_m: self.dedup.radius_m,
                    time_window_s: self.dedup.time_window_s,
                },
                self.escrow.refund_timeout_s,
            ),
            verification: self.verification_params().expect("validated"),
            threshold: self.trust.threshold,
            weights: Weights {
                filtered: self.trust.w_filtered,
                unfiltered: self.trust.w_unfiltered,
            },
            algorithms: self.trust.algorithms.clone(),
            balances: Vec::new(),
        }
    }

    pub fn geometry(&self) -> GeometrySpec {
        GeometrySpec {
            filter: self.verification_params().expect("validated"),
            ..GeometrySpec::default()
        }
    }

    pub fn experiment_config(&self, seed: u64) -> ExperimentConfig {
        ExperimentConfig {
            total: self.experiment.total,
            step: self.experiment.step,
            seed,
            p_pass_filter: self.experiment.p_pass_filter,
            geometry: self.geometry(),
            settings: self.sim_settings(),
        }
    }
}

const SECTIONS: [&str; 6] = ["ledger", "verification", "trust", "dedup", "escrow", "experiment"];

fn apply_env<I>(table: &mut toml::Table, env: I) -> Result<(), ConfigError>
where
    I: IntoIterator<Item = (String, String)>,
{
    let mut vars: Vec<(String, String)> = env.into_iter().filter(|(k, _)| k.starts_with(ENV_PREFIX)).collect();
    vars.sort();
    for (name, raw) in vars {
        let rest = name[ENV_PREFIX.len()..].to_ascii_lowercase();
        let (section, key) = SECTIONS
            .iter()
            .find_map(|s| rest.strip_prefix(s).and_then(|k| k.strip_prefix('_')).map(|k| (*s, k)))
            .ok_or_else(|| invalid(&name, "environment override names no known section"))?;
        let value = parse_env_value(&raw);
        let entry = table
            .entry(section)
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        match entry {
            toml::Value::Table(t) => {
                t.insert(key.to_owned(), value);
            }
            _ => return Err(invalid(section, "is not a table")),
        }
    }
    Ok(())
}

/// Interprets an override as a TOML value (number, bool, array), falling
/// back to a plain string.
fn parse_env_value(raw: &str) -> toml::Value {
    format!("v = {raw}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_owned()))
}
