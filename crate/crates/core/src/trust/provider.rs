use std::collections::BTreeMap;

use super::algorithms::{IncidentEvidence, ScoreResult, TrustAlgorithm};
use super::db::EvidenceDb;
use super::TrustError;
use crate::contracts::{CallOutcome, ContractError, Node, RequestId, RequestState, TrustRequest, TrustScope, TrustScoreRecord};
use crate::evidence::VerificationParams;
use crate::ledger::{EventPayload, LedgerEvent};
use crate::{AccountId, SimTime};

/// Scores one request from `db` and packages the result for delivery.
/// Provider-scope requests pool the reviews of all the provider's incidents,
/// each filtered against its own incident.
pub fn serve_request(
    request: &TrustRequest,
    db: &EvidenceDb,
    algorithm: &dyn TrustAlgorithm,
    params: &VerificationParams,
    default_threshold: f64,
    now: SimTime,
) -> Result<TrustScoreRecord, TrustError> {
    if request.state != RequestState::Open {
        return Err(TrustError::RequestNotOpen(request.request_id));
    }
    let evidence: Vec<IncidentEvidence<'_>> = match request.scope {
        TrustScope::Incident(id) => {
            let incident = db.incident(id).ok_or(TrustError::UnknownScope)?;
            vec![IncidentEvidence {
                incident,
                reviews: db.reviews_for(id),
            }]
        }
        TrustScope::Provider(p) => {
            let groups: Vec<_> = db
                .incidents_by(p)
                .map(|incident| IncidentEvidence {
                    incident,
                    reviews: db.reviews_for(incident.incident_id),
                })
                .collect();
            if groups.is_empty() {
                return Err(TrustError::UnknownScope);
            }
            groups
        }
    };
    if evidence.iter().all(|g| g.reviews.is_empty()) {
        return Err(TrustError::NoEvidence);
    }
    let threshold = request.threshold.unwrap_or(default_threshold);
    let result = algorithm.score(&evidence, params, threshold)?;
    Ok(record_from(request.request_id, result, now))
}

pub fn record_from(request_id: RequestId, result: ScoreResult, now: SimTime) -> TrustScoreRecord {
    TrustScoreRecord {
        request_id,
        algorithm_id: result.algorithm_id,
        score: result.score,
        trusted: result.trusted,
        total_reviews: result.total,
        verified_feedback: result.verified,
        delivered_at: now,
    }
}

/// An independent trust provider: listens to the event list, keeps its own
/// evidence database and answers requests with its chosen algorithm.
#[derive(Debug)]
pub struct TrustProvider {
    account: AccountId,
    algorithm: Box<dyn TrustAlgorithm>,
    params: VerificationParams,
    threshold: f64,
    db: EvidenceDb,
    open: BTreeMap<RequestId, TrustRequest>,
}

#[derive(Debug, thiserror::Error)]
pub enum ServeError {
    #[error(transparent)]
    Trust(#[from] TrustError),
    #[error(transparent)]
    Contract(#[from] ContractError),
}

impl TrustProvider {
    pub fn new(account: AccountId, algorithm: Box<dyn TrustAlgorithm>, params: VerificationParams, threshold: f64) -> Self {
        TrustProvider {
            account,
            algorithm,
            params,
            threshold,
            db: EvidenceDb::new(),
            open: BTreeMap::new(),
        }
    }

    pub fn account(&self) -> AccountId {
        self.account
    }

    pub fn algorithm_id(&self) -> &str {
        self.algorithm.id()
    }

    pub fn db(&self) -> &EvidenceDb {
        &self.db
    }

    /// Consumes new events: evidence goes to the database, request events
    /// maintain the queue of open requests.
    pub fn ingest(&mut self, events: &[LedgerEvent]) -> Result<(), TrustError> {
        self.db.ingest(events)?;
        for ev in events {
            match &ev.payload {
                EventPayload::TrustScoreRequested(req) => {
                    self.open.insert(req.request_id, req.clone());
                }
                EventPayload::TrustScoreDelivered(rec) => {
                    self.open.remove(&rec.request_id);
                }
                EventPayload::RequestRefunded(req) => {
                    self.open.remove(&req.request_id);
                }
                _ => {}
            }
        }
        Ok(())
    }

    pub fn sync(&mut self, node: &Node) -> Result<(), TrustError> {
        let events = node.events_since(self.db.cursor());
        self.ingest(events)
    }

    /// Open requests seen on the event list, oldest first.
    pub fn pending_requests(&self) -> Vec<RequestId> {
        self.open.keys().copied().collect()
    }

    pub fn score(&self, request_id: RequestId, now: SimTime) -> Result<TrustScoreRecord, TrustError> {
        let request = self.open.get(&request_id).ok_or(TrustError::RequestNotOpen(request_id))?;
        serve_request(request, &self.db, self.algorithm.as_ref(), &self.params, self.threshold, now)
    }

    /// Scores `request_id` and delivers the record through the trust-provider
    /// contract.
    pub fn respond(&mut self, node: &mut Node, request_id: RequestId, now: SimTime) -> Result<(TrustScoreRecord, CallOutcome), ServeError> {
        let record = self.score(request_id, now)?;
        let outcome = node.deliver_trust_score(self.account, record.clone(), now)?;
        self.open.remove(&request_id);
        Ok((record, outcome))
    }
}
