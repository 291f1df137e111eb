use serde::{Deserialize, Serialize};

use crate::evidence::Position;
use crate::{AccountId, SimTime};

macro_rules! id_type {
    ($name:ident) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        pub struct $name(pub u64);

        impl std::fmt::Display for $name {
            fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
                write!(f, "{}", self.0)
            }
        }
    };
}

id_type!(IncidentId);
id_type!(ReviewId);
id_type!(RequestId);

/// Incident class. The set is open: anything not listed is carried as
/// `Other`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Classification {
    Accident,
    Congestion,
    RoadWork,
    Other(String),
}

impl Classification {
    pub fn as_str(&self) -> &str {
        match self {
            Classification::Accident => "accident",
            Classification::Congestion => "congestion",
            Classification::RoadWork => "road-work",
            Classification::Other(s) => s,
        }
    }
}

impl std::str::FromStr for Classification {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "accident" => Classification::Accident,
            "congestion" => Classification::Congestion,
            "road-work" => Classification::RoadWork,
            other => Classification::Other(other.to_owned()),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Positive,
    Negative,
}

impl Verdict {
    pub fn is_positive(self) -> bool {
        self == Verdict::Positive
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Positive => "positive",
            Verdict::Negative => "negative",
        }
    }
}

/// A provider's report: the information held by the information contract.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Incident {
    pub incident_id: IncidentId,
    pub provider: AccountId,
    pub location: Position,
    /// Degrees in [0, 360).
    pub heading: f64,
    pub reported_at: SimTime,
    pub classification: Classification,
}

/// A consumer's verdict on an incident, stamped with the reviewer's own
/// position, heading and observation time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Review {
    pub review_id: ReviewId,
    pub reviewer: AccountId,
    pub incident_id: IncidentId,
    pub verdict: Verdict,
    pub location: Position,
    /// Degrees in [0, 360).
    pub heading: f64,
    pub observed_at: SimTime,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TrustScope {
    Incident(IncidentId),
    Provider(AccountId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RequestState {
    Open,
    Fulfilled,
    Refunded,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrustRequest {
    pub request_id: RequestId,
    pub consumer: AccountId,
    pub scope: TrustScope,
    pub payment: u64,
    /// Threshold nominated by the consumer; providers fall back to their
    /// configured default when absent.
    pub threshold: Option<f64>,
    pub created_at: SimTime,
    pub state: RequestState,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrustScoreRecord {
    pub request_id: RequestId,
    pub algorithm_id: String,
    pub score: f64,
    pub trusted: bool,
    pub total_reviews: u64,
    pub verified_feedback: u64,
    pub delivered_at: SimTime,
}

impl TrustScoreRecord {
    pub fn is_valid(&self) -> bool {
        (0.0..=1.0).contains(&self.score) && self.verified_feedback <= self.total_reviews
    }
}
