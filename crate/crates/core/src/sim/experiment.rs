//! The incremental-evidence experiment: reviews arrive `step` at a time with
//! a fixed share being good, and all three algorithms are re-scored on the
//! cumulative evidence after every round.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::scenario::{check_probability, GeometrySpec, ReviewSampler, REVIEWER_BASE, SCENARIO_CONSUMER, SCENARIO_PROVIDER};
use super::{SimError, SimSettings};
use crate::contracts::{CallOutcome, IncidentId, Node, TrustScope, Verdict};
use crate::trust::{algorithm_by_id, TrustProvider, FILTERED_AVERAGE_ID, SIMPLE_ID, WEIGHTED_ID};
use crate::AccountId;

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub total: usize,
    pub step: usize,
    pub seed: u64,
    pub p_pass_filter: f64,
    pub geometry: GeometrySpec,
    pub settings: SimSettings,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            total: 1000,
            step: 10,
            seed: DEFAULT_SEED,
            p_pass_filter: 0.7,
            geometry: GeometrySpec::default(),
            settings: SimSettings::default(),
        }
    }
}

pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExperimentRow {
    pub n: usize,
    pub alg1: f64,
    pub alg2: f64,
    pub alg3: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSeries {
    pub p_good: f64,
    pub seed: u64,
    pub rows: Vec<ExperimentRow>,
}

impl ExperimentSeries {
    /// Plot-ready CSV: header `n,alg1,alg2,alg3`, one row per round.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in &self.rows {
            w.serialize(row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }

    pub fn last(&self) -> Option<&ExperimentRow> {
        self.rows.last()
    }
}

/// Runs the experiment for one `p_good`; see [`run_incremental_experiment_on`].
pub fn run_incremental_experiment(p_good: f64, config: &ExperimentConfig) -> Result<ExperimentSeries, SimError> {
    run_incremental_experiment_on(p_good, config).map(|(series, _)| series)
}

/// Runs the experiment through the full ledger, contract and trust-provider
/// path and also returns the node, so the generated evidence can be checked
/// independently.
///
/// Each round submits `step` reviews (each positive with probability
/// `p_good`), seals them, opens one free request per algorithm and lets the
/// matching trust provider answer it on chain.
pub fn run_incremental_experiment_on(p_good: f64, config: &ExperimentConfig) -> Result<(ExperimentSeries, Node), SimError> {
    check_probability("p_good", p_good)?;
    check_probability("p_pass_filter", config.p_pass_filter)?;
    let ExperimentConfig { total, step, seed, .. } = *config;
    if step == 0 || total == 0 || !total.is_multiple_of(step) {
        return Err(SimError::BadStep { total, step });
    }
    let settings = &config.settings;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut node = settings.new_node();
    let g = &config.geometry;
    let incident_id = match node.submit_incident(SCENARIO_PROVIDER, g.incident_position, g.incident_heading, 0, g.classification.clone())? {
        CallOutcome::IncidentCreated(id) => id,
        other => unreachable!("fresh node produced {other:?}"),
    };
    let reported_at = node.state().incident(incident_id).expect("just created").reported_at;

    let weights = settings.weights;
    let mut providers = Vec::with_capacity(3);
    for (k, id) in [SIMPLE_ID, FILTERED_AVERAGE_ID, WEIGHTED_ID].into_iter().enumerate() {
        providers.push(TrustProvider::new(
            AccountId(super::scenario::TRUST_PROVIDER_BASE + k as u64),
            algorithm_by_id(id, weights)?,
            settings.verification,
            settings.threshold,
        ));
    }

    let mut sampler = ReviewSampler::new(config.geometry.clone(), config.p_pass_filter, reported_at);
    let mut rows = Vec::with_capacity(total / step);
    let mut submitted = 0usize;
    let mut now = reported_at;
    while submitted < total {
        for _ in 0..step {
            now = sampler.next_arrival(&mut rng);
            let verdict = if rng.random_bool(p_good) { Verdict::Positive } else { Verdict::Negative };
            let (location, heading, observed_at) = sampler.geometry(&mut rng, reported_at, now);
            node.submit_review(
                AccountId(REVIEWER_BASE + submitted as u64),
                incident_id,
                verdict,
                location,
                heading,
                observed_at,
                now,
            )?;
            submitted += 1;
        }
        let scores = score_round(&mut node, &mut providers, incident_id, now)?;
        rows.push(ExperimentRow {
            n: submitted,
            alg1: scores[0],
            alg2: scores[1],
            alg3: scores[2],
        });
    }
    Ok((ExperimentSeries { p_good, seed, rows }, node))
}

fn score_round(node: &mut Node, providers: &mut [TrustProvider], incident_id: IncidentId, now: u64) -> Result<[f64; 3], SimError> {
    let mut requests = [None; 3];
    for slot in requests.iter_mut() {
        *slot = Some(node.request_trust_score(SCENARIO_CONSUMER, TrustScope::Incident(incident_id), 0, None, now)?);
    }
    node.flush(now);
    let mut scores = [0.0; 3];
    for (k, tp) in providers.iter_mut().enumerate() {
        tp.sync(node)?;
        let (record, _) = tp.respond(node, requests[k].expect("filled"), now)?;
        scores[k] = record.score;
    }
    node.flush(now);
    Ok(scores)
}

/// Draws `p_good` uniformly from [0, 1] with `seed`, then runs the
/// experiment with it.
pub fn run_random_percentage_experiment(config: &ExperimentConfig) -> Result<ExperimentSeries, SimError> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x5eed_9e37_79b9_7f4a);
    let p_good = rng.random::<f64>();
    run_incremental_experiment(p_good, config)
}
