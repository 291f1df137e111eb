use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};
use serde::Serialize;

use super::{SimError, SimSettings};
use crate::contracts::{CallOutcome, Classification, ContractCall, IncidentId, Node, TrustScope, TrustScoreRecord, Verdict};
use crate::evidence::{normalize_heading, Position, VerificationParams};
use crate::trust::{EvidenceDb, TrustProvider};
use crate::{AccountId, SimTime};

pub const SCENARIO_PROVIDER: AccountId = AccountId(1);
pub const SCENARIO_CONSUMER: AccountId = AccountId(2);
/// Reviewer `i` (0-based) uses account `REVIEWER_BASE + i`.
pub const REVIEWER_BASE: u64 = 1000;
/// Trust provider `k` uses account `TRUST_PROVIDER_BASE + k`.
pub const TRUST_PROVIDER_BASE: u64 = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioKind {
    AllSupporting,
    AllOpposing,
    RandomSplit,
}

impl ScenarioKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioKind::AllSupporting => "all-supporting",
            ScenarioKind::AllOpposing => "all-opposing",
            ScenarioKind::RandomSplit => "random-split",
        }
    }
}

impl std::str::FromStr for ScenarioKind {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self, SimError> {
        match s {
            "all-supporting" => Ok(ScenarioKind::AllSupporting),
            "all-opposing" => Ok(ScenarioKind::AllOpposing),
            "random-split" => Ok(ScenarioKind::RandomSplit),
            other => Err(SimError::InvalidSpec(format!("unknown scenario kind {other:?}"))),
        }
    }
}

/// Where the incident is and the filter its reviews are placed against.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometrySpec {
    pub incident_position: Position,
    pub incident_heading: f64,
    pub classification: Classification,
    pub filter: VerificationParams,
}

impl Default for GeometrySpec {
    fn default() -> Self {
        GeometrySpec {
            incident_position: Position::new(0.0, 0.0),
            incident_heading: 90.0,
            classification: Classification::Accident,
            filter: VerificationParams::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec {
    pub kind: ScenarioKind,
    /// One incident submission plus `n_transactions - 1` reviews.
    pub n_transactions: usize,
    pub seed: u64,
    pub geometry: GeometrySpec,
    pub p_pass_filter: f64,
}

impl ScenarioSpec {
    pub fn validate(&self) -> Result<(), SimError> {
        if self.n_transactions == 0 {
            return Err(SimError::InvalidSpec("n_transactions must be > 0".into()));
        }
        check_probability("p_pass_filter", self.p_pass_filter)?;
        if !self.geometry.incident_position.is_finite() || !self.geometry.incident_heading.is_finite() {
            return Err(SimError::InvalidSpec("incident geometry must be finite".into()));
        }
        self.geometry
            .filter
            .validate()
            .map_err(|e| SimError::InvalidSpec(e.to_string()))
    }
}

pub(crate) fn check_probability(name: &'static str, p: f64) -> Result<(), SimError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(SimError::InvalidProbability(name, p))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScheduledCall {
    pub at: SimTime,
    pub call: ContractCall,
}

/// Places reviews around an incident so that each passes the evidence
/// filter with probability `p_pass`, and spaces submissions with
/// exponential inter-arrival times (mean one simulated second).
///
/// Positions are uniform in a disk of radius `radius / sqrt(p_pass)`, so
/// the share landing within `radius` is `p_pass`. Headings and observation
/// times always fall inside the filter's bounds.
pub(crate) struct ReviewSampler {
    geometry: GeometrySpec,
    p_pass: f64,
    arrival: Exp<f64>,
    clock: f64,
}

impl ReviewSampler {
    pub fn new(geometry: GeometrySpec, p_pass: f64, start: SimTime) -> Self {
        ReviewSampler {
            geometry,
            p_pass,
            arrival: Exp::new(1.0).expect("rate 1 is valid"),
            clock: start as f64,
        }
    }

    pub fn next_arrival<R: Rng>(&mut self, rng: &mut R) -> SimTime {
        self.clock += self.arrival.sample(rng);
        self.clock.floor() as SimTime
    }

    /// Samples (location, heading, observed_at) for a review submitted at
    /// `now` of an incident reported at `reported_at`.
    pub fn geometry<R: Rng>(&self, rng: &mut R, reported_at: SimTime, now: SimTime) -> (Position, f64, SimTime) {
        let g = &self.geometry;
        let radius = if g.filter.radius.is_finite() { g.filter.radius } else { 200.0 };
        let dist = if self.p_pass > 0.0 {
            radius / self.p_pass.sqrt() * rng.random::<f64>().sqrt()
        } else {
            // Annulus just outside the filter radius.
            radius * (2.0 - rng.random::<f64>())
        };
        let theta = rng.random::<f64>() * std::f64::consts::TAU;
        let location = Position::new(
            g.incident_position.x + dist * theta.cos(),
            g.incident_position.y + dist * theta.sin(),
        );
        let tol = g.filter.heading_tolerance.min(180.0) * 0.95;
        let heading = normalize_heading(g.incident_heading + (2.0 * rng.random::<f64>() - 1.0) * tol);
        let elapsed = now.saturating_sub(reported_at);
        let span = if g.filter.time_window.is_finite() {
            elapsed.min(g.filter.time_window.floor() as u64)
        } else {
            elapsed
        };
        let observed_at = reported_at + (rng.random::<f64>() * span as f64).floor() as u64;
        (location, heading, observed_at)
    }
}

/// Deterministic call sequence for `spec`: the incident report, then
/// `n - 1` reviews whose verdicts follow the scenario kind.
pub fn generate_scenario(spec: &ScenarioSpec) -> Result<Vec<ScheduledCall>, SimError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut sampler = ReviewSampler::new(spec.geometry.clone(), spec.p_pass_filter, 0);
    let mut calls = Vec::with_capacity(spec.n_transactions);
    calls.push(ScheduledCall {
        at: 0,
        call: ContractCall::SubmitIncident {
            provider: SCENARIO_PROVIDER,
            location: spec.geometry.incident_position,
            heading: spec.geometry.incident_heading,
            classification: spec.geometry.classification.clone(),
        },
    });
    for i in 0..spec.n_transactions - 1 {
        let at = sampler.next_arrival(&mut rng);
        let verdict = match spec.kind {
            ScenarioKind::AllSupporting => Verdict::Positive,
            ScenarioKind::AllOpposing => Verdict::Negative,
            ScenarioKind::RandomSplit => {
                if rng.random_bool(0.5) {
                    Verdict::Positive
                } else {
                    Verdict::Negative
                }
            }
        };
        let (location, heading, observed_at) = sampler.geometry(&mut rng, 0, at);
        calls.push(ScheduledCall {
            at,
            call: ContractCall::SubmitReview {
                reviewer: AccountId(REVIEWER_BASE + i as u64),
                incident_id: IncidentId(1),
                verdict,
                location,
                heading,
                observed_at,
            },
        });
    }
    Ok(calls)
}

/// Result of executing a scenario end to end.
#[derive(Debug)]
pub struct ScenarioRun {
    pub node: Node,
    pub incident_id: IncidentId,
    /// Delivered records, one per enabled algorithm, in configured order.
    pub records: Vec<TrustScoreRecord>,
    /// Evidence database of the first trust provider.
    pub evidence: EvidenceDb,
}

/// Executes `calls` on a fresh node, then has the consumer request one
/// score per enabled algorithm and lets each trust provider answer its own
/// request through the contracts.
pub fn run_scenario(calls: &[ScheduledCall], settings: &SimSettings) -> Result<ScenarioRun, SimError> {
    let mut node = settings.new_node();
    let mut incident_id = None;
    let mut now = 0;
    for sc in calls {
        now = now.max(sc.at);
        let outcome = node.execute(&sc.call, sc.at)?;
        if let (None, CallOutcome::IncidentCreated(id)) = (incident_id, outcome) {
            incident_id = Some(id);
        }
    }
    let incident_id = incident_id.ok_or_else(|| SimError::InvalidSpec("scenario reported no incident".into()))?;
    let mut providers = settings.providers()?;
    let mut requests = Vec::with_capacity(providers.len());
    for _ in &providers {
        requests.push(node.request_trust_score(SCENARIO_CONSUMER, TrustScope::Incident(incident_id), 0, None, now)?);
    }
    node.flush(now);
    let mut records = Vec::with_capacity(providers.len());
    for (tp, req) in providers.iter_mut().zip(&requests) {
        tp.sync(&node)?;
        records.push(tp.respond(&mut node, *req, now)?.0);
    }
    node.flush(now);
    for tp in &mut providers {
        tp.sync(&node)?;
    }
    let evidence = providers
        .first()
        .map(|tp: &TrustProvider| tp.db().clone())
        .unwrap_or_else(|| EvidenceDb::from_events(node.events_since(0)).expect("events contiguous"));
    Ok(ScenarioRun {
        node,
        incident_id,
        records,
        evidence,
    })
}
