//! Deterministic simulator for a trust-management architecture in which
//! independent trust providers score incident reports over one shared,
//! ledger-held evidence set, and only reviews with a provable spatio-temporal
//! interaction count as feedback.
//!
//! Layering, bottom up: [`ledger`] (hash-chained blocks and the event list),
//! [`contracts`] (information, feedback and trust-provider contracts),
//! [`evidence`] (the interaction check), [`trust`] (scoring and providers),
//! [`sim`] (scenarios and experiments) and [`cli`] (command implementations).

pub mod cli;
mod codec;
pub mod config;
pub mod contracts;
pub mod evidence;
pub mod ledger;
pub mod sim;
pub mod trust;

pub use codec::DecodeError;

use serde::{Deserialize, Serialize};

/// Simulation time in whole seconds since the simulation epoch.
pub type SimTime = u64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AccountId(pub u64);

impl std::fmt::Display for AccountId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}
