use thiserror::Error;

use super::call::ContractCall;
use super::state::{CallOutcome, ContractConfig, ContractError, ContractState};
use super::types::*;
use crate::codec::DecodeError;
use crate::evidence::Position;
use crate::ledger::{Block, Ledger, LedgerConfig, LedgerEvent};
use crate::{AccountId, SimTime};

/// A single ledger with the three contracts deployed on it. Calls are
/// validated and applied on submission; the transaction and its event are
/// published when the enclosing block seals.
#[derive(Debug, Clone)]
pub struct Node {
    ledger: Ledger,
    state: ContractState,
}

impl Node {
    pub fn new(ledger: LedgerConfig, contracts: ContractConfig, balances: impl IntoIterator<Item = (AccountId, u64)>) -> Self {
        Node {
            ledger: Ledger::new(ledger),
            state: ContractState::new(contracts, balances),
        }
    }

    pub fn ledger(&self) -> &Ledger {
        &self.ledger
    }

    pub fn state(&self) -> &ContractState {
        &self.state
    }

    pub fn execute(&mut self, call: &ContractCall, now: SimTime) -> Result<CallOutcome, ContractError> {
        self.ledger.check_time(now)?;
        // Interval sealing happens before the call so that its events are
        // published in the block matching the call's time.
        self.ledger.tick(now);
        let (outcome, event) = self.state.apply(call, now)?;
        self.ledger
            .append_with_event(call.sender(), call.encode(), now, Some(event))?;
        Ok(outcome)
    }

    pub fn submit_incident(
        &mut self,
        provider: AccountId,
        location: Position,
        heading: f64,
        now: SimTime,
        classification: Classification,
    ) -> Result<CallOutcome, ContractError> {
        self.execute(
            &ContractCall::SubmitIncident {
                provider,
                location,
                heading,
                classification,
            },
            now,
        )
    }

    #[allow(clippy::too_many_arguments)]
    pub fn submit_review(
        &mut self,
        reviewer: AccountId,
        incident_id: IncidentId,
        verdict: Verdict,
        location: Position,
        heading: f64,
        observed_at: SimTime,
        now: SimTime,
    ) -> Result<ReviewId, ContractError> {
        let call = ContractCall::SubmitReview {
            reviewer,
            incident_id,
            verdict,
            location,
            heading,
            observed_at,
        };
        match self.execute(&call, now)? {
            CallOutcome::ReviewStored(id) => Ok(id),
            other => unreachable!("review produced {other:?}"),
        }
    }

    pub fn request_trust_score(
        &mut self,
        consumer: AccountId,
        scope: TrustScope,
        payment: u64,
        threshold: Option<f64>,
        now: SimTime,
    ) -> Result<RequestId, ContractError> {
        let call = ContractCall::RequestTrustScore {
            consumer,
            scope,
            payment,
            threshold,
        };
        match self.execute(&call, now)? {
            CallOutcome::RequestOpened(id) => Ok(id),
            other => unreachable!("request produced {other:?}"),
        }
    }

    pub fn deliver_trust_score(&mut self, trust_provider: AccountId, record: TrustScoreRecord, now: SimTime) -> Result<CallOutcome, ContractError> {
        self.execute(&ContractCall::DeliverTrustScore { trust_provider, record }, now)
    }

    pub fn refund_request(&mut self, caller: AccountId, request_id: RequestId, now: SimTime) -> Result<CallOutcome, ContractError> {
        self.execute(&ContractCall::RefundRequest { caller, request_id }, now)
    }

    pub fn seal_block(&mut self, now: SimTime) -> &Block {
        self.ledger.seal_block(now)
    }

    /// Seals pending transactions, if any.
    pub fn flush(&mut self, now: SimTime) {
        self.ledger.flush(now);
    }

    pub fn events_since(&self, cursor: u64) -> &[LedgerEvent] {
        self.ledger.events_since(cursor)
    }

    /// Rebuilds a node by re-executing every transaction recorded in
    /// `blocks` (genesis first) on fresh contract state.
    pub fn replay(
        ledger: LedgerConfig,
        contracts: ContractConfig,
        balances: impl IntoIterator<Item = (AccountId, u64)>,
        blocks: &[Block],
    ) -> Result<Node, ReplayError> {
        let mut node = Node::new(
            LedgerConfig {
                block_interval_s: 0,
                block_capacity: usize::MAX,
            },
            contracts,
            balances,
        );
        for block in blocks.iter().skip(1) {
            for tx in &block.transactions {
                let call = ContractCall::decode(&tx.payload).map_err(|e| ReplayError::Decode(tx.tx_id.0, e))?;
                if call.sender() != tx.sender {
                    return Err(ReplayError::Call(tx.tx_id.0, ContractError::SenderMismatch));
                }
                node.execute(&call, tx.sim_time)
                    .map_err(|e| ReplayError::Call(tx.tx_id.0, e))?;
            }
            node.ledger.seal_block(block.sealed_at);
        }
        node.ledger.set_config(ledger);
        Ok(node)
    }
}

#[derive(Debug, Error)]
pub enum ReplayError {
    #[error("transaction {0}: {1}")]
    Decode(u64, DecodeError),
    #[error("transaction {0}: {1}")]
    Call(u64, ContractError),
}
