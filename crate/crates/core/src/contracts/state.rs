use std::collections::{BTreeMap, HashMap};

use serde::Serialize;
use thiserror::Error;

use super::call::ContractCall;
use super::types::*;
use crate::evidence::{distance, normalize_heading, Position};
use crate::ledger::{EventPayload, LedgerError};
use crate::{AccountId, SimTime};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ContractError {
    #[error("non-finite coordinates or heading")]
    InvalidGeometry,
    #[error("unknown incident {0}")]
    UnknownIncident(IncidentId),
    #[error("provider may not review its own incident")]
    SelfReview,
    #[error("provider already reported this incident as {0}")]
    DuplicateOwnIncident(IncidentId),
    #[error("insufficient balance: need {needed}, have {available}")]
    InsufficientBalance { needed: u64, available: u64 },
    #[error("trust request scope target does not exist")]
    UnknownScopeTarget,
    #[error("threshold {0} outside [0, 1]")]
    InvalidThreshold(f64),
    #[error("unknown request {0}")]
    UnknownRequest(RequestId),
    #[error("request {0} already fulfilled")]
    AlreadyFulfilled(RequestId),
    #[error("request {0} already refunded")]
    AlreadyRefunded(RequestId),
    #[error("request opened at {created_at} expires at {expires_at}; now {now}")]
    NotYetExpired {
        created_at: SimTime,
        expires_at: SimTime,
        now: SimTime,
    },
    #[error("trust score record violates its invariants")]
    InvalidRecord,
    #[error("transaction sender does not match the call")]
    SenderMismatch,
    #[error(transparent)]
    Ledger(#[from] LedgerError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DedupParams {
    pub radius_m: f64,
    pub time_window_s: u64,
}

impl Default for DedupParams {
    fn default() -> Self {
        DedupParams {
            radius_m: 200.0,
            time_window_s: 900,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ContractConfig {
    pub dedup: DedupParams,
    pub refund_timeout_s: u64,
}

impl ContractConfig {
    pub const DEFAULT_REFUND_TIMEOUT_S: u64 = 3600;

    pub fn new(dedup: DedupParams, refund_timeout_s: u64) -> Self {
        ContractConfig { dedup, refund_timeout_s }
    }
}

/// Escrow movement produced by a delivery or refund.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Receipt {
    pub request_id: RequestId,
    pub credited: AccountId,
    pub amount: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CallOutcome {
    IncidentCreated(IncidentId),
    /// A repeated report inside the dedup buffer, stored as a positive
    /// review of the existing incident.
    DedupRedirect { incident_id: IncidentId, review_id: ReviewId },
    ReviewStored(ReviewId),
    RequestOpened(RequestId),
    Delivered(Receipt),
    Refunded(Receipt),
}

/// State of the information, feedback and trust-provider contracts.
#[derive(Debug, Clone)]
pub struct ContractState {
    config: ContractConfig,
    incidents: BTreeMap<IncidentId, Incident>,
    /// Active reviews per incident, in submission order.
    reviews: BTreeMap<IncidentId, Vec<Review>>,
    latest_review: HashMap<(AccountId, IncidentId), ReviewId>,
    requests: BTreeMap<RequestId, TrustRequest>,
    records: BTreeMap<RequestId, (AccountId, TrustScoreRecord)>,
    balances: BTreeMap<AccountId, u64>,
    escrow: u64,
    total_credits: u64,
    next_incident: u64,
    next_review: u64,
    next_request: u64,
}

impl ContractState {
    /// `balances` is the genesis allocation; no credits are created later.
    pub fn new(config: ContractConfig, balances: impl IntoIterator<Item = (AccountId, u64)>) -> Self {
        let balances: BTreeMap<_, _> = balances.into_iter().collect();
        let total_credits = balances.values().sum();
        ContractState {
            config,
            incidents: BTreeMap::new(),
            reviews: BTreeMap::new(),
            latest_review: HashMap::new(),
            requests: BTreeMap::new(),
            records: BTreeMap::new(),
            balances,
            escrow: 0,
            total_credits,
            next_incident: 1,
            next_review: 1,
            next_request: 1,
        }
    }

    pub fn config(&self) -> &ContractConfig {
        &self.config
    }

    /// Validates and applies `call` at time `now`, returning its outcome and
    /// the event to publish. State is untouched on error.
    pub fn apply(&mut self, call: &ContractCall, now: SimTime) -> Result<(CallOutcome, EventPayload), ContractError> {
        match call {
            ContractCall::SubmitIncident {
                provider,
                location,
                heading,
                classification,
            } => self.submit_incident(*provider, *location, *heading, now, classification.clone()),
            ContractCall::SubmitReview {
                reviewer,
                incident_id,
                verdict,
                location,
                heading,
                observed_at,
            } => {
                let review = self.submit_review(*reviewer, *incident_id, *verdict, *location, *heading, *observed_at)?;
                Ok((CallOutcome::ReviewStored(review.review_id), EventPayload::EvidenceSubmitted(review)))
            }
            ContractCall::RequestTrustScore {
                consumer,
                scope,
                payment,
                threshold,
            } => self.request_trust_score(*consumer, *scope, *payment, *threshold, now),
            ContractCall::DeliverTrustScore { trust_provider, record } => self.deliver_trust_score(*trust_provider, record),
            ContractCall::RefundRequest { request_id, .. } => self.refund_request(*request_id, now),
        }
    }

    fn submit_incident(
        &mut self,
        provider: AccountId,
        location: Position,
        heading: f64,
        now: SimTime,
        classification: Classification,
    ) -> Result<(CallOutcome, EventPayload), ContractError> {
        if !location.is_finite() || !heading.is_finite() {
            return Err(ContractError::InvalidGeometry);
        }
        let heading = normalize_heading(heading);
        if let Some(existing) = self.find_duplicate(location, now, &classification) {
            let existing_id = existing.incident_id;
            if existing.provider == provider {
                return Err(ContractError::DuplicateOwnIncident(existing_id));
            }
            let review = self.store_review(provider, existing_id, Verdict::Positive, location, heading, now);
            return Ok((
                CallOutcome::DedupRedirect {
                    incident_id: existing_id,
                    review_id: review.review_id,
                },
                EventPayload::EvidenceSubmitted(review),
            ));
        }
        let incident = Incident {
            incident_id: IncidentId(self.next_incident),
            provider,
            location,
            heading,
            reported_at: now,
            classification,
        };
        self.next_incident += 1;
        self.incidents.insert(incident.incident_id, incident.clone());
        Ok((CallOutcome::IncidentCreated(incident.incident_id), EventPayload::IncidentReported(incident)))
    }

    /// Earliest incident of the same class inside the dedup buffer.
    pub fn find_duplicate(&self, location: Position, at: SimTime, classification: &Classification) -> Option<&Incident> {
        let dedup = self.config.dedup;
        self.incidents.values().find(|inc| {
            inc.classification == *classification
                && inc.reported_at.abs_diff(at) <= dedup.time_window_s
                && distance(inc.location, location) <= dedup.radius_m
        })
    }

    fn submit_review(
        &mut self,
        reviewer: AccountId,
        incident_id: IncidentId,
        verdict: Verdict,
        location: Position,
        heading: f64,
        observed_at: SimTime,
    ) -> Result<Review, ContractError> {
        if !location.is_finite() || !heading.is_finite() {
            return Err(ContractError::InvalidGeometry);
        }
        let incident = self
            .incidents
            .get(&incident_id)
            .ok_or(ContractError::UnknownIncident(incident_id))?;
        if incident.provider == reviewer {
            return Err(ContractError::SelfReview);
        }
        Ok(self.store_review(reviewer, incident_id, verdict, location, normalize_heading(heading), observed_at))
    }

    /// Stores a review, replacing the reviewer's earlier review of the same
    /// incident if there is one.
    fn store_review(
        &mut self,
        reviewer: AccountId,
        incident_id: IncidentId,
        verdict: Verdict,
        location: Position,
        heading: f64,
        observed_at: SimTime,
    ) -> Review {
        let review = Review {
            review_id: ReviewId(self.next_review),
            reviewer,
            incident_id,
            verdict,
            location,
            heading,
            observed_at,
        };
        self.next_review += 1;
        let list = self.reviews.entry(incident_id).or_default();
        if let Some(old) = self.latest_review.insert((reviewer, incident_id), review.review_id) {
            list.retain(|r| r.review_id != old);
        }
        list.push(review.clone());
        review
    }

    fn request_trust_score(
        &mut self,
        consumer: AccountId,
        scope: TrustScope,
        payment: u64,
        threshold: Option<f64>,
        now: SimTime,
    ) -> Result<(CallOutcome, EventPayload), ContractError> {
        if let Some(t) = threshold {
            if !(0.0..=1.0).contains(&t) {
                return Err(ContractError::InvalidThreshold(t));
            }
        }
        let exists = match scope {
            TrustScope::Incident(id) => self.incidents.contains_key(&id),
            TrustScope::Provider(p) => self.incidents.values().any(|i| i.provider == p),
        };
        if !exists {
            return Err(ContractError::UnknownScopeTarget);
        }
        let available = self.balance(consumer);
        if available < payment {
            return Err(ContractError::InsufficientBalance {
                needed: payment,
                available,
            });
        }
        if payment > 0 {
            *self.balances.entry(consumer).or_default() -= payment;
            self.escrow += payment;
        }
        let request = TrustRequest {
            request_id: RequestId(self.next_request),
            consumer,
            scope,
            payment,
            threshold,
            created_at: now,
            state: RequestState::Open,
        };
        self.next_request += 1;
        self.requests.insert(request.request_id, request.clone());
        Ok((CallOutcome::RequestOpened(request.request_id), EventPayload::TrustScoreRequested(request)))
    }

    fn open_request(&self, request_id: RequestId) -> Result<&TrustRequest, ContractError> {
        let req = self
            .requests
            .get(&request_id)
            .ok_or(ContractError::UnknownRequest(request_id))?;
        match req.state {
            RequestState::Open => Ok(req),
            RequestState::Fulfilled => Err(ContractError::AlreadyFulfilled(request_id)),
            RequestState::Refunded => Err(ContractError::AlreadyRefunded(request_id)),
        }
    }

    fn deliver_trust_score(&mut self, trust_provider: AccountId, record: &TrustScoreRecord) -> Result<(CallOutcome, EventPayload), ContractError> {
        if !record.is_valid() {
            return Err(ContractError::InvalidRecord);
        }
        let payment = self.open_request(record.request_id)?.payment;
        let req = self.requests.get_mut(&record.request_id).expect("checked open");
        req.state = RequestState::Fulfilled;
        self.escrow -= payment;
        *self.balances.entry(trust_provider).or_default() += payment;
        self.records.insert(record.request_id, (trust_provider, record.clone()));
        let receipt = Receipt {
            request_id: record.request_id,
            credited: trust_provider,
            amount: payment,
        };
        Ok((CallOutcome::Delivered(receipt), EventPayload::TrustScoreDelivered(record.clone())))
    }

    fn refund_request(&mut self, request_id: RequestId, now: SimTime) -> Result<(CallOutcome, EventPayload), ContractError> {
        let req = self.open_request(request_id)?;
        let expires_at = req.created_at.saturating_add(self.config.refund_timeout_s);
        if now < expires_at {
            return Err(ContractError::NotYetExpired {
                created_at: req.created_at,
                expires_at,
                now,
            });
        }
        let req = self.requests.get_mut(&request_id).expect("checked open");
        req.state = RequestState::Refunded;
        let (consumer, payment) = (req.consumer, req.payment);
        let snapshot = req.clone();
        self.escrow -= payment;
        *self.balances.entry(consumer).or_default() += payment;
        let receipt = Receipt {
            request_id,
            credited: consumer,
            amount: payment,
        };
        Ok((CallOutcome::Refunded(receipt), EventPayload::RequestRefunded(snapshot)))
    }

    pub fn incident(&self, id: IncidentId) -> Option<&Incident> {
        self.incidents.get(&id)
    }

    pub fn incidents(&self) -> impl Iterator<Item = &Incident> {
        self.incidents.values()
    }

    pub fn incident_count(&self) -> usize {
        self.incidents.len()
    }

    /// Active reviews of `id`, in submission order.
    pub fn reviews_for(&self, id: IncidentId) -> &[Review] {
        self.reviews.get(&id).map(Vec::as_slice).unwrap_or(&[])
    }

    /// The universal evidence set: every active review, by incident.
    pub fn all_reviews(&self) -> impl Iterator<Item = &Review> {
        self.reviews.values().flatten()
    }

    pub fn review_count(&self) -> usize {
        self.reviews.values().map(Vec::len).sum()
    }

    pub fn request(&self, id: RequestId) -> Option<&TrustRequest> {
        self.requests.get(&id)
    }

    pub fn requests(&self) -> impl Iterator<Item = &TrustRequest> {
        self.requests.values()
    }

    pub fn delivered(&self, id: RequestId) -> Option<&(AccountId, TrustScoreRecord)> {
        self.records.get(&id)
    }

    pub fn balance(&self, account: AccountId) -> u64 {
        self.balances.get(&account).copied().unwrap_or(0)
    }

    pub fn balances(&self) -> &BTreeMap<AccountId, u64> {
        &self.balances
    }

    pub fn escrow(&self) -> u64 {
        self.escrow
    }

    /// Credits allocated at genesis.
    pub fn total_credits(&self) -> u64 {
        self.total_credits
    }

    /// Account balances plus escrow; equals [`total_credits`](Self::total_credits)
    /// in every reachable state.
    pub fn circulating_credits(&self) -> u64 {
        self.balances.values().sum::<u64>() + self.escrow
    }

    /// CSV of `account_id,balance`, ascending by account.
    pub fn balances_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["account_id", "balance"]).expect("in-memory write");
        for (acct, bal) in &self.balances {
            w.write_record([acct.0.to_string(), bal.to_string()]).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const A: AccountId = AccountId(1);
    const B: AccountId = AccountId(2);
    const CONSUMER: AccountId = AccountId(10);
    const TP: AccountId = AccountId(20);

    fn state() -> ContractState {
        ContractState::new(
            ContractConfig::new(DedupParams::default(), 3600),
            [(CONSUMER, 10), (AccountId(11), 1)],
        )
    }

    fn incident_call(who: AccountId, x: f64, class: Classification) -> ContractCall {
        ContractCall::SubmitIncident {
            provider: who,
            location: Position::new(x, 0.0),
            heading: 90.0,
            classification: class,
        }
    }

    fn review_call(who: AccountId, verdict: Verdict) -> ContractCall {
        ContractCall::SubmitReview {
            reviewer: who,
            incident_id: IncidentId(1),
            verdict,
            location: Position::new(10.0, 0.0),
            heading: 90.0,
            observed_at: 5,
        }
    }

    fn request(s: &mut ContractState, consumer: AccountId, payment: u64, now: SimTime) -> Result<RequestId, ContractError> {
        let call = ContractCall::RequestTrustScore {
            consumer,
            scope: TrustScope::Incident(IncidentId(1)),
            payment,
            threshold: None,
        };
        match s.apply(&call, now)?.0 {
            CallOutcome::RequestOpened(id) => Ok(id),
            other => panic!("{other:?}"),
        }
    }

    fn record(id: RequestId, score: f64) -> TrustScoreRecord {
        TrustScoreRecord {
            request_id: id,
            algorithm_id: "simple".into(),
            score,
            trusted: score >= 0.5,
            total_reviews: 4,
            verified_feedback: 2,
            delivered_at: 7,
        }
    }

    fn deliver(s: &mut ContractState, rec: TrustScoreRecord) -> Result<CallOutcome, ContractError> {
        s.apply(
            &ContractCall::DeliverTrustScore {
                trust_provider: TP,
                record: rec,
            },
            7,
        )
        .map(|o| o.0)
    }

    #[test]
    fn first_report_creates_incident() {
        let mut s = state();
        let (out, ev) = s.apply(&incident_call(A, 0.0, Classification::Accident), 0).unwrap();
        assert_eq!(out, CallOutcome::IncidentCreated(IncidentId(1)));
        assert!(matches!(ev, EventPayload::IncidentReported(_)));
    }

    #[test]
    fn nearby_repeat_becomes_positive_review() {
        let mut s = state();
        s.apply(&incident_call(A, 0.0, Classification::Accident), 0).unwrap();
        let (out, ev) = s.apply(&incident_call(B, 50.0, Classification::Accident), 60).unwrap();
        assert_eq!(
            out,
            CallOutcome::DedupRedirect {
                incident_id: IncidentId(1),
                review_id: ReviewId(1)
            }
        );
        let EventPayload::EvidenceSubmitted(r) = ev else { panic!() };
        assert_eq!((r.reviewer, r.verdict, r.observed_at), (B, Verdict::Positive, 60));
        assert_eq!(s.incident_count(), 1);
        assert_eq!(s.review_count(), 1);
    }

    #[test]
    fn far_or_different_class_is_new_incident() {
        let mut s = state();
        s.apply(&incident_call(A, 0.0, Classification::Accident), 0).unwrap();
        let (out, _) = s.apply(&incident_call(B, 10_000.0, Classification::Accident), 60).unwrap();
        assert_eq!(out, CallOutcome::IncidentCreated(IncidentId(2)));
        let (out, _) = s.apply(&incident_call(B, 0.0, Classification::Congestion), 60).unwrap();
        assert_eq!(out, CallOutcome::IncidentCreated(IncidentId(3)));
        let (out, _) = s.apply(&incident_call(B, 0.0, Classification::Accident), 901).unwrap();
        assert_eq!(out, CallOutcome::IncidentCreated(IncidentId(4)));
    }

    #[test]
    fn own_repeat_is_rejected() {
        let mut s = state();
        s.apply(&incident_call(A, 0.0, Classification::Accident), 0).unwrap();
        assert_eq!(
            s.apply(&incident_call(A, 5.0, Classification::Accident), 1).unwrap_err(),
            ContractError::DuplicateOwnIncident(IncidentId(1))
        );
    }

    #[test]
    fn invalid_geometry() {
        let mut s = state();
        let call = ContractCall::SubmitIncident {
            provider: A,
            location: Position::new(f64::NAN, 0.0),
            heading: 0.0,
            classification: Classification::Accident,
        };
        assert_eq!(s.apply(&call, 0).unwrap_err(), ContractError::InvalidGeometry);
        let call = ContractCall::SubmitIncident {
            provider: A,
            location: Position::new(0.0, 0.0),
            heading: f64::INFINITY,
            classification: Classification::Accident,
        };
        assert_eq!(s.apply(&call, 0).unwrap_err(), ContractError::InvalidGeometry);
    }

    #[test]
    fn heading_is_normalized() {
        let mut s = state();
        let call = ContractCall::SubmitIncident {
            provider: A,
            location: Position::new(0.0, 0.0),
            heading: -30.0,
            classification: Classification::Accident,
        };
        s.apply(&call, 0).unwrap();
        assert_eq!(s.incident(IncidentId(1)).unwrap().heading, 330.0);
    }

    #[test]
    fn review_errors() {
        let mut s = state();
        assert_eq!(
            s.apply(&review_call(B, Verdict::Positive), 1).unwrap_err(),
            ContractError::UnknownIncident(IncidentId(1))
        );
        s.apply(&incident_call(A, 0.0, Classification::Accident), 1).unwrap();
        assert_eq!(s.apply(&review_call(A, Verdict::Positive), 2).unwrap_err(), ContractError::SelfReview);
        assert_eq!(s.review_count(), 0);
    }

    #[test]
    fn later_review_replaces_earlier() {
        let mut s = state();
        s.apply(&incident_call(A, 0.0, Classification::Accident), 0).unwrap();
        s.apply(&review_call(B, Verdict::Positive), 1).unwrap();
        s.apply(&review_call(AccountId(3), Verdict::Positive), 2).unwrap();
        s.apply(&review_call(B, Verdict::Negative), 3).unwrap();
        let reviews = s.reviews_for(IncidentId(1));
        assert_eq!(reviews.len(), 2);
        assert_eq!(reviews[1].reviewer, B);
        assert_eq!(reviews[1].verdict, Verdict::Negative);
    }

    #[test]
    fn escrow_arithmetic() {
        let mut s = state();
        s.apply(&incident_call(A, 0.0, Classification::Accident), 0).unwrap();
        let id = request(&mut s, CONSUMER, 3, 1).unwrap();
        assert_eq!((s.balance(CONSUMER), s.escrow()), (7, 3));
        request(&mut s, CONSUMER, 0, 1).unwrap();
        assert_eq!(s.escrow(), 3);
        assert_eq!(
            request(&mut s, AccountId(11), 5, 1).unwrap_err(),
            ContractError::InsufficientBalance { needed: 5, available: 1 }
        );
        assert_eq!(s.requests().count(), 2);

        assert_eq!(
            deliver(&mut s, record(id, 0.75)).unwrap(),
            CallOutcome::Delivered(Receipt {
                request_id: id,
                credited: TP,
                amount: 3
            })
        );
        assert_eq!((s.balance(TP), s.escrow()), (3, 0));
        assert_eq!(deliver(&mut s, record(id, 0.75)).unwrap_err(), ContractError::AlreadyFulfilled(id));
        assert_eq!(s.balance(TP), 3);
        assert_eq!(s.circulating_credits(), s.total_credits());
    }

    #[test]
    fn out_of_range_record_rejected_before_state_change() {
        let mut s = state();
        s.apply(&incident_call(A, 0.0, Classification::Accident), 0).unwrap();
        let id = request(&mut s, CONSUMER, 3, 1).unwrap();
        assert_eq!(deliver(&mut s, record(id, 1.2)).unwrap_err(), ContractError::InvalidRecord);
        let mut bad = record(id, 0.5);
        bad.verified_feedback = 9;
        assert_eq!(deliver(&mut s, bad).unwrap_err(), ContractError::InvalidRecord);
        assert_eq!(s.request(id).unwrap().state, RequestState::Open);
        assert_eq!(deliver(&mut s, record(RequestId(99), 0.5)).unwrap_err(), ContractError::UnknownRequest(RequestId(99)));
    }

    #[test]
    fn scope_target_must_exist() {
        let mut s = state();
        assert_eq!(request(&mut s, CONSUMER, 0, 0).unwrap_err(), ContractError::UnknownScopeTarget);
        s.apply(&incident_call(A, 0.0, Classification::Accident), 0).unwrap();
        let by_provider = |p| ContractCall::RequestTrustScore {
            consumer: CONSUMER,
            scope: TrustScope::Provider(p),
            payment: 0,
            threshold: Some(0.6),
        };
        assert!(s.apply(&by_provider(A), 0).is_ok());
        assert_eq!(s.apply(&by_provider(B), 0).unwrap_err(), ContractError::UnknownScopeTarget);
    }

    #[test]
    fn refund_rules() {
        let mut s = state();
        s.apply(&incident_call(A, 0.0, Classification::Accident), 0).unwrap();
        let id = request(&mut s, CONSUMER, 4, 100).unwrap();
        let refund = |s: &mut ContractState, now| {
            s.apply(
                &ContractCall::RefundRequest {
                    caller: CONSUMER,
                    request_id: id,
                },
                now,
            )
        };
        assert!(matches!(refund(&mut s, 101).unwrap_err(), ContractError::NotYetExpired { .. }));
        let (out, _) = refund(&mut s, 3700).unwrap();
        assert_eq!(
            out,
            CallOutcome::Refunded(Receipt {
                request_id: id,
                credited: CONSUMER,
                amount: 4
            })
        );
        assert_eq!(s.balance(CONSUMER), 10);
        assert_eq!(refund(&mut s, 3800).unwrap_err(), ContractError::AlreadyRefunded(id));
        assert_eq!(deliver(&mut s, record(id, 0.5)).unwrap_err(), ContractError::AlreadyRefunded(id));

        let id2 = request(&mut s, CONSUMER, 1, 3800).unwrap();
        deliver(&mut s, record(id2, 0.5)).unwrap();
        let err = s
            .apply(
                &ContractCall::RefundRequest {
                    caller: CONSUMER,
                    request_id: id2,
                },
                99_999,
            )
            .unwrap_err();
        assert_eq!(err, ContractError::AlreadyFulfilled(id2));
    }

    #[test]
    fn balances_csv_sorted() {
        let s = state();
        assert_eq!(s.balances_csv(), "account_id,balance\n10,10\n11,1\n");
    }
}
