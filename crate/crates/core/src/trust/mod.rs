//! Trust providers: independent event consumers that score incidents and
//! information providers over the shared evidence set.

mod algorithms;
mod db;
mod provider;

use thiserror::Error;

use crate::contracts::RequestId;

pub use algorithms::{
    algorithm_by_id, score_filtered_average, score_simple, score_weighted, FilteredAverage, IncidentEvidence, ScoreResult, Simple, Tally,
    TrustAlgorithm, Weighted, Weights, FILTERED_AVERAGE_ID, SIMPLE_ID, WEIGHTED_ID,
};
pub use db::EvidenceDb;
pub use provider::{record_from, serve_request, ServeError, TrustProvider};

/// Default decision threshold: trust the majority.
pub const DEFAULT_THRESHOLD: f64 = 0.5;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TrustError {
    #[error("no reviews to score")]
    EmptyEvidence,
    #[error("weights ({0}, {1}) must be non-negative and sum to 1")]
    BadWeights(f64, f64),
    #[error("threshold {0} outside [0, 1]")]
    InvalidThreshold(f64),
    #[error("event gap: expected seq {expected}, got {got}")]
    EventGap { expected: u64, got: u64 },
    #[error("scope exists but has no reviews")]
    NoEvidence,
    #[error("scope target unknown to this provider")]
    UnknownScope,
    #[error("request {0} is not open")]
    RequestNotOpen(RequestId),
    #[error("unknown algorithm id {0:?}")]
    UnknownAlgorithm(String),
}
