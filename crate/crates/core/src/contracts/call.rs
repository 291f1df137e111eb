//! Contract call records and their canonical payload encoding.

use serde::{Deserialize, Serialize};

use super::types::*;
use crate::codec::{DecodeError, Reader, Writer};
use crate::evidence::Position;
use crate::{AccountId, SimTime};

const TAG_SUBMIT_INCIDENT: u8 = 0x01;
const TAG_SUBMIT_REVIEW: u8 = 0x02;
const TAG_REQUEST_SCORE: u8 = 0x03;
const TAG_DELIVER_SCORE: u8 = 0x04;
const TAG_REFUND: u8 = 0x05;

/// A call against one of the three contracts. The transaction sender is the
/// account named in the call; time comes from the transaction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "call", rename_all = "snake_case")]
pub enum ContractCall {
    SubmitIncident {
        provider: AccountId,
        location: Position,
        heading: f64,
        classification: Classification,
    },
    SubmitReview {
        reviewer: AccountId,
        incident_id: IncidentId,
        verdict: Verdict,
        location: Position,
        heading: f64,
        observed_at: SimTime,
    },
    RequestTrustScore {
        consumer: AccountId,
        scope: TrustScope,
        payment: u64,
        threshold: Option<f64>,
    },
    DeliverTrustScore {
        trust_provider: AccountId,
        record: TrustScoreRecord,
    },
    RefundRequest {
        caller: AccountId,
        request_id: RequestId,
    },
}

impl ContractCall {
    pub fn sender(&self) -> AccountId {
        match self {
            ContractCall::SubmitIncident { provider, .. } => *provider,
            ContractCall::SubmitReview { reviewer, .. } => *reviewer,
            ContractCall::RequestTrustScore { consumer, .. } => *consumer,
            ContractCall::DeliverTrustScore { trust_provider, .. } => *trust_provider,
            ContractCall::RefundRequest { caller, .. } => *caller,
        }
    }

    pub fn encode(&self) -> Vec<u8> {
        let mut w = Writer::new();
        match self {
            ContractCall::SubmitIncident {
                provider,
                location,
                heading,
                classification,
            } => {
                w.u8(TAG_SUBMIT_INCIDENT).u64(provider.0);
                put_position(&mut w, *location);
                w.f64(*heading);
                put_class(&mut w, classification);
            }
            ContractCall::SubmitReview {
                reviewer,
                incident_id,
                verdict,
                location,
                heading,
                observed_at,
            } => {
                w.u8(TAG_SUBMIT_REVIEW)
                    .u64(reviewer.0)
                    .u64(incident_id.0)
                    .u8(verdict_byte(*verdict));
                put_position(&mut w, *location);
                w.f64(*heading).u64(*observed_at);
            }
            ContractCall::RequestTrustScore {
                consumer,
                scope,
                payment,
                threshold,
            } => {
                w.u8(TAG_REQUEST_SCORE).u64(consumer.0);
                match scope {
                    TrustScope::Incident(id) => w.u8(0).u64(id.0),
                    TrustScope::Provider(acct) => w.u8(1).u64(acct.0),
                };
                w.u64(*payment);
                match threshold {
                    None => w.u8(0),
                    Some(t) => w.u8(1).f64(*t),
                };
            }
            ContractCall::DeliverTrustScore { trust_provider, record } => {
                w.u8(TAG_DELIVER_SCORE)
                    .u64(trust_provider.0)
                    .u64(record.request_id.0)
                    .str(&record.algorithm_id)
                    .f64(record.score)
                    .u8(record.trusted as u8)
                    .u64(record.total_reviews)
                    .u64(record.verified_feedback)
                    .u64(record.delivered_at);
            }
            ContractCall::RefundRequest { caller, request_id } => {
                w.u8(TAG_REFUND).u64(caller.0).u64(request_id.0);
            }
        }
        w.finish()
    }

    pub fn decode(bytes: &[u8]) -> Result<Self, DecodeError> {
        let mut r = Reader::new(bytes);
        let at = r.offset();
        let call = match r.u8()? {
            TAG_SUBMIT_INCIDENT => ContractCall::SubmitIncident {
                provider: AccountId(r.u64()?),
                location: get_position(&mut r)?,
                heading: r.f64()?,
                classification: get_class(&mut r)?,
            },
            TAG_SUBMIT_REVIEW => ContractCall::SubmitReview {
                reviewer: AccountId(r.u64()?),
                incident_id: IncidentId(r.u64()?),
                verdict: get_verdict(&mut r)?,
                location: get_position(&mut r)?,
                heading: r.f64()?,
                observed_at: r.u64()?,
            },
            TAG_REQUEST_SCORE => {
                let consumer = AccountId(r.u64()?);
                let scope = match r.u8()? {
                    0 => TrustScope::Incident(IncidentId(r.u64()?)),
                    1 => TrustScope::Provider(AccountId(r.u64()?)),
                    _ => return Err(DecodeError::Invalid("scope tag")),
                };
                let payment = r.u64()?;
                let threshold = match r.u8()? {
                    0 => None,
                    1 => Some(r.f64()?),
                    _ => return Err(DecodeError::Invalid("threshold flag")),
                };
                ContractCall::RequestTrustScore {
                    consumer,
                    scope,
                    payment,
                    threshold,
                }
            }
            TAG_DELIVER_SCORE => {
                let trust_provider = AccountId(r.u64()?);
                let record = TrustScoreRecord {
                    request_id: RequestId(r.u64()?),
                    algorithm_id: r.string()?,
                    score: r.f64()?,
                    trusted: match r.u8()? {
                        0 => false,
                        1 => true,
                        _ => return Err(DecodeError::Invalid("bool")),
                    },
                    total_reviews: r.u64()?,
                    verified_feedback: r.u64()?,
                    delivered_at: r.u64()?,
                };
                ContractCall::DeliverTrustScore { trust_provider, record }
            }
            TAG_REFUND => ContractCall::RefundRequest {
                caller: AccountId(r.u64()?),
                request_id: RequestId(r.u64()?),
            },
            tag => return Err(DecodeError::UnknownTag { tag, offset: at }),
        };
        r.finish()?;
        Ok(call)
    }

    /// Debug mirror of the binary payload.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("contract call serializes")
    }
}

fn put_position(w: &mut Writer, p: Position) {
    w.f64(p.x).f64(p.y);
}

fn get_position(r: &mut Reader<'_>) -> Result<Position, DecodeError> {
    Ok(Position::new(r.f64()?, r.f64()?))
}

fn verdict_byte(v: Verdict) -> u8 {
    match v {
        Verdict::Positive => 1,
        Verdict::Negative => 0,
    }
}

fn get_verdict(r: &mut Reader<'_>) -> Result<Verdict, DecodeError> {
    match r.u8()? {
        1 => Ok(Verdict::Positive),
        0 => Ok(Verdict::Negative),
        _ => Err(DecodeError::Invalid("verdict")),
    }
}

fn put_class(w: &mut Writer, c: &Classification) {
    match c {
        Classification::Accident => w.u8(0),
        Classification::Congestion => w.u8(1),
        Classification::RoadWork => w.u8(2),
        Classification::Other(s) => w.u8(0xFF).str(s),
    };
}

fn get_class(r: &mut Reader<'_>) -> Result<Classification, DecodeError> {
    let at = r.offset();
    Ok(match r.u8()? {
        0 => Classification::Accident,
        1 => Classification::Congestion,
        2 => Classification::RoadWork,
        0xFF => Classification::Other(r.string()?),
        tag => return Err(DecodeError::UnknownTag { tag, offset: at }),
    })
}
