//! The information, feedback and trust-provider contracts as deterministic
//! state machines over ledger transactions.

mod call;
mod node;
mod state;
mod types;

pub use call::ContractCall;
pub use node::{Node, ReplayError};
pub use state::{CallOutcome, ContractConfig, ContractError, ContractState, DedupParams, Receipt};
pub use types::*;
