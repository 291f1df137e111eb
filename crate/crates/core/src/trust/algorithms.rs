//! The three scoring algorithms and the pluggable interface they share.
//!
//! Every algorithm works from the same two fractions: `u`, the positive
//! share of all reviews, and `f`, the positive share of the reviews that pass
//! the evidence filter. When nothing passes the filter `f` falls back to `u`.

use serde::Serialize;

use super::TrustError;
use crate::contracts::{Incident, Review};
use crate::evidence::{verify_interaction, VerificationParams};

pub const SIMPLE_ID: &str = "simple";
pub const FILTERED_AVERAGE_ID: &str = "filtered-average";
pub const WEIGHTED_ID: &str = "weighted";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoreResult {
    pub algorithm_id: String,
    pub score: f64,
    pub trusted: bool,
    pub total: u64,
    pub verified: u64,
}

/// Reviews of one incident, filtered against that incident's geometry.
#[derive(Debug, Clone, Copy)]
pub struct IncidentEvidence<'a> {
    pub incident: &'a Incident,
    pub reviews: &'a [Review],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Tally {
    pub total: u64,
    pub positive: u64,
    pub verified: u64,
    pub verified_positive: u64,
}

impl Tally {
    pub fn of(evidence: &[IncidentEvidence<'_>], params: &VerificationParams) -> Tally {
        let mut t = Tally::default();
        for group in evidence {
            for r in group.reviews {
                let pos = r.verdict.is_positive() as u64;
                t.total += 1;
                t.positive += pos;
                if verify_interaction(group.incident, r, params) {
                    t.verified += 1;
                    t.verified_positive += pos;
                }
            }
        }
        t
    }

    fn unfiltered(&self) -> f64 {
        self.positive as f64 / self.total as f64
    }

    fn filtered(&self) -> f64 {
        if self.verified == 0 {
            self.unfiltered()
        } else {
            self.verified_positive as f64 / self.verified as f64
        }
    }
}

/// Non-negative weights for the filtered and unfiltered fractions, summing
/// to one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Weights {
    pub filtered: f64,
    pub unfiltered: f64,
}

impl Default for Weights {
    fn default() -> Self {
        Weights {
            filtered: 0.7,
            unfiltered: 0.3,
        }
    }
}

impl Weights {
    pub const SUM_TOLERANCE: f64 = 1e-9;

    pub fn new(filtered: f64, unfiltered: f64) -> Result<Self, TrustError> {
        let w = Weights { filtered, unfiltered };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<(), TrustError> {
        let ok = self.filtered >= 0.0
            && self.unfiltered >= 0.0
            && ((self.filtered + self.unfiltered) - 1.0).abs() <= Self::SUM_TOLERANCE;
        if ok {
            Ok(())
        } else {
            Err(TrustError::BadWeights(self.filtered, self.unfiltered))
        }
    }
}

fn check_threshold(threshold: f64) -> Result<(), TrustError> {
    if (0.0..=1.0).contains(&threshold) {
        Ok(())
    } else {
        Err(TrustError::InvalidThreshold(threshold))
    }
}

fn finish(id: &str, score: f64, tally: Tally, threshold: f64) -> ScoreResult {
    let score = score.clamp(0.0, 1.0);
    ScoreResult {
        algorithm_id: id.to_owned(),
        score,
        trusted: score >= threshold,
        total: tally.total,
        verified: tally.verified,
    }
}

fn simple_from(tally: Tally, threshold: f64) -> Result<ScoreResult, TrustError> {
    check_threshold(threshold)?;
    if tally.total == 0 {
        return Err(TrustError::EmptyEvidence);
    }
    // No filtering: every review counts as verified.
    let tally = Tally {
        verified: tally.total,
        verified_positive: tally.positive,
        ..tally
    };
    Ok(finish(SIMPLE_ID, tally.unfiltered(), tally, threshold))
}

fn filtered_average_from(tally: Tally, threshold: f64) -> Result<ScoreResult, TrustError> {
    check_threshold(threshold)?;
    if tally.total == 0 {
        return Err(TrustError::EmptyEvidence);
    }
    let (u, f) = (tally.unfiltered(), tally.filtered());
    Ok(finish(FILTERED_AVERAGE_ID, (u + f) / 2.0, tally, threshold))
}

fn weighted_from(tally: Tally, weights: Weights, threshold: f64) -> Result<ScoreResult, TrustError> {
    check_threshold(threshold)?;
    weights.validate()?;
    if tally.total == 0 {
        return Err(TrustError::EmptyEvidence);
    }
    let (u, f) = (tally.unfiltered(), tally.filtered());
    // With f == u the blend is u whatever the weights; returning it directly
    // keeps the result exact instead of off by rounding.
    let score = if f == u {
        u
    } else {
        weights.filtered * f + weights.unfiltered * u
    };
    Ok(finish(WEIGHTED_ID, score, tally, threshold))
}

/// Algorithm 1: share of positive reviews, no filtering.
pub fn score_simple(reviews: &[Review], threshold: f64) -> Result<ScoreResult, TrustError> {
    let total = reviews.len() as u64;
    let positive = reviews.iter().filter(|r| r.verdict.is_positive()).count() as u64;
    simple_from(
        Tally {
            total,
            positive,
            ..Tally::default()
        },
        threshold,
    )
}

/// Algorithm 2: mean of the unfiltered and filtered positive shares.
pub fn score_filtered_average(
    incident: &Incident,
    reviews: &[Review],
    params: &VerificationParams,
    threshold: f64,
) -> Result<ScoreResult, TrustError> {
    filtered_average_from(Tally::of(&[IncidentEvidence { incident, reviews }], params), threshold)
}

/// Algorithm 3: weighted blend of the filtered and unfiltered shares.
pub fn score_weighted(
    incident: &Incident,
    reviews: &[Review],
    params: &VerificationParams,
    weights: Weights,
    threshold: f64,
) -> Result<ScoreResult, TrustError> {
    weighted_from(Tally::of(&[IncidentEvidence { incident, reviews }], params), weights, threshold)
}

/// A scoring algorithm a trust provider can run over pooled evidence.
pub trait TrustAlgorithm: Send + Sync + std::fmt::Debug {
    fn id(&self) -> &str;

    fn score(&self, evidence: &[IncidentEvidence<'_>], params: &VerificationParams, threshold: f64) -> Result<ScoreResult, TrustError>;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Simple;

impl TrustAlgorithm for Simple {
    fn id(&self) -> &str {
        SIMPLE_ID
    }

    fn score(&self, evidence: &[IncidentEvidence<'_>], params: &VerificationParams, threshold: f64) -> Result<ScoreResult, TrustError> {
        simple_from(Tally::of(evidence, params), threshold)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct FilteredAverage;

impl TrustAlgorithm for FilteredAverage {
    fn id(&self) -> &str {
        FILTERED_AVERAGE_ID
    }

    fn score(&self, evidence: &[IncidentEvidence<'_>], params: &VerificationParams, threshold: f64) -> Result<ScoreResult, TrustError> {
        filtered_average_from(Tally::of(evidence, params), threshold)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Weighted(pub Weights);

impl TrustAlgorithm for Weighted {
    fn id(&self) -> &str {
        WEIGHTED_ID
    }

    fn score(&self, evidence: &[IncidentEvidence<'_>], params: &VerificationParams, threshold: f64) -> Result<ScoreResult, TrustError> {
        weighted_from(Tally::of(evidence, params), self.0, threshold)
    }
}

/// Looks up a built-in algorithm by its string id.
pub fn algorithm_by_id(id: &str, weights: Weights) -> Result<Box<dyn TrustAlgorithm>, TrustError> {
    match id {
        SIMPLE_ID => Ok(Box::new(Simple)),
        FILTERED_AVERAGE_ID => Ok(Box::new(FilteredAverage)),
        WEIGHTED_ID => {
            weights.validate()?;
            Ok(Box::new(Weighted(weights)))
        }
        other => Err(TrustError::UnknownAlgorithm(other.to_owned())),
    }
}
