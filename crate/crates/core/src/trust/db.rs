use std::collections::BTreeMap;

use super::TrustError;
use crate::contracts::{Incident, IncidentId, Review};
use crate::ledger::{EventPayload, LedgerEvent};
use crate::AccountId;

/// A trust provider's growing evidence database, built only from the ledger
/// event list.
///
/// Reviews come from `EvidenceSubmitted` events. The incident catalog comes
/// from `IncidentReported` events and is needed to filter each review
/// against its incident's geometry. Every other event only advances the
/// cursor.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EvidenceDb {
    incidents: BTreeMap<IncidentId, Incident>,
    reviews: BTreeMap<IncidentId, Vec<Review>>,
    cursor: u64,
}

impl EvidenceDb {
    pub fn new() -> Self {
        Self::default()
    }

    /// Replays `events` (which must start at seq 1) into an empty database.
    pub fn from_events(events: &[LedgerEvent]) -> Result<Self, TrustError> {
        let mut db = Self::new();
        db.ingest(events)?;
        Ok(db)
    }

    pub fn cursor(&self) -> u64 {
        self.cursor
    }

    /// Applies a contiguous run of events starting at `cursor + 1`. Nothing
    /// is applied if the run has a gap.
    pub fn ingest(&mut self, events: &[LedgerEvent]) -> Result<(), TrustError> {
        for (i, ev) in events.iter().enumerate() {
            let expected = self.cursor + 1 + i as u64;
            if ev.event_seq != expected {
                return Err(TrustError::EventGap {
                    expected,
                    got: ev.event_seq,
                });
            }
        }
        for ev in events {
            match &ev.payload {
                EventPayload::IncidentReported(inc) => {
                    self.incidents.insert(inc.incident_id, inc.clone());
                }
                EventPayload::EvidenceSubmitted(review) => {
                    let list = self.reviews.entry(review.incident_id).or_default();
                    // One active review per reviewer and incident.
                    list.retain(|r| r.reviewer != review.reviewer);
                    list.push(review.clone());
                }
                _ => {}
            }
            self.cursor = ev.event_seq;
        }
        Ok(())
    }

    pub fn incident(&self, id: IncidentId) -> Option<&Incident> {
        self.incidents.get(&id)
    }

    pub fn incidents_by(&self, provider: AccountId) -> impl Iterator<Item = &Incident> {
        self.incidents.values().filter(move |i| i.provider == provider)
    }

    pub fn reviews_for(&self, id: IncidentId) -> &[Review] {
        self.reviews.get(&id).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn review_count(&self) -> usize {
        self.reviews.values().map(Vec::len).sum()
    }

    /// Snapshot as CSV with header
    /// `incident_id,review_id,reviewer,verdict,x,y,heading,observed_at`.
    pub fn export_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["incident_id", "review_id", "reviewer", "verdict", "x", "y", "heading", "observed_at"])
            .expect("in-memory write");
        for r in self.reviews.values().flatten() {
            w.write_record([
                r.incident_id.to_string(),
                r.review_id.to_string(),
                r.reviewer.0.to_string(),
                r.verdict.as_str().to_owned(),
                r.location.x.to_string(),
                r.location.y.to_string(),
                r.heading.to_string(),
                r.observed_at.to_string(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }
}
