//! Seeded scenario generation and the incremental-evidence experiment.

mod experiment;
mod scenario;

use thiserror::Error;

use crate::contracts::{ContractConfig, ContractError, Node};
use crate::evidence::VerificationParams;
use crate::ledger::LedgerConfig;
use crate::trust::{algorithm_by_id, ServeError, TrustError, TrustProvider, Weights, DEFAULT_THRESHOLD, FILTERED_AVERAGE_ID, SIMPLE_ID, WEIGHTED_ID};
use crate::AccountId;

pub use experiment::{
    run_incremental_experiment, run_incremental_experiment_on, run_random_percentage_experiment, ExperimentConfig, ExperimentRow,
    ExperimentSeries, DEFAULT_SEED,
};
pub use scenario::{
    generate_scenario, run_scenario, GeometrySpec, ScenarioKind, ScenarioRun, ScenarioSpec, ScheduledCall, REVIEWER_BASE, SCENARIO_CONSUMER,
    SCENARIO_PROVIDER, TRUST_PROVIDER_BASE,
};

#[derive(Debug, Error)]
pub enum SimError {
    #[error("step {step} must be positive and divide total {total}")]
    BadStep { total: usize, step: usize },
    #[error("{0} = {1} is not a probability")]
    InvalidProbability(&'static str, f64),
    #[error("invalid scenario: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Contract(#[from] ContractError),
    #[error(transparent)]
    Trust(#[from] TrustError),
    #[error(transparent)]
    Serve(#[from] ServeError),
}

/// Everything needed to stand up a node and its trust providers.
#[derive(Debug, Clone, PartialEq)]
pub struct SimSettings {
    pub ledger: LedgerConfig,
    pub contracts: ContractConfig,
    pub verification: VerificationParams,
    pub threshold: f64,
    pub weights: Weights,
    /// Algorithm ids, one trust provider each.
    pub algorithms: Vec<String>,
    pub balances: Vec<(AccountId, u64)>,
}

impl Default for SimSettings {
    fn default() -> Self {
        SimSettings {
            ledger: LedgerConfig::default(),
            contracts: ContractConfig::new(Default::default(), ContractConfig::DEFAULT_REFUND_TIMEOUT_S),
            verification: VerificationParams::default(),
            threshold: DEFAULT_THRESHOLD,
            weights: Weights::default(),
            algorithms: [SIMPLE_ID, FILTERED_AVERAGE_ID, WEIGHTED_ID].map(String::from).to_vec(),
            balances: Vec::new(),
        }
    }
}

impl SimSettings {
    pub fn new_node(&self) -> Node {
        Node::new(self.ledger, self.contracts, self.balances.iter().copied())
    }

    /// One trust provider per configured algorithm, with accounts
    /// `TRUST_PROVIDER_BASE + k`.
    pub fn providers(&self) -> Result<Vec<TrustProvider>, TrustError> {
        self.algorithms
            .iter()
            .enumerate()
            .map(|(k, id)| {
                Ok(TrustProvider::new(
                    AccountId(TRUST_PROVIDER_BASE + k as u64),
                    algorithm_by_id(id, self.weights)?,
                    self.verification,
                    self.threshold,
                ))
            })
            .collect()
    }
}
