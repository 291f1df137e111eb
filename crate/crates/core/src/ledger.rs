//! Simulated append-only, hash-chained ledger.
//!
//! Transactions are queued in a pending pool and sealed into blocks either
//! explicitly, when the pool reaches the configured capacity, or when the
//! simulation clock crosses a block-interval boundary. Each transaction may
//! carry an event draft; drafts are published to the event list, in block
//! order, when their block is sealed.

use serde::{Deserialize, Serialize};
use sha2::{Digest as _, Sha256};
use thiserror::Error;

use crate::codec::{DecodeError, Reader, Writer};
use crate::contracts::{Incident, Review, TrustRequest, TrustScoreRecord};
use crate::{AccountId, SimTime};

/// Identifier of the digest used for block and body hashes. Recorded in every
/// block header starting with genesis.
pub const HASH_ALG_SHA256: u8 = 1;

const DUMP_MAGIC: &[u8; 8] = b"VBCHAIN1";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LedgerError {
    #[error("transaction payload is empty")]
    EmptyPayload,
    #[error("clock regression: {got} is earlier than last accepted time {last}")]
    ClockRegression { got: SimTime, last: SimTime },
}

/// A 256-bit digest.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Hash256(pub [u8; 32]);

impl Hash256 {
    pub const ZERO: Hash256 = Hash256([0; 32]);

    pub fn of(bytes: &[u8]) -> Self {
        Hash256(Sha256::digest(bytes).into())
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.0)
    }
}

impl std::fmt::Debug for Hash256 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Hash256({})", &self.to_hex()[..16])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TxId(pub u64);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transaction {
    pub tx_id: TxId,
    pub sender: AccountId,
    pub payload: Vec<u8>,
    pub sim_time: SimTime,
}

impl Transaction {
    fn encode_into(&self, w: &mut Writer) {
        w.u64(self.tx_id.0)
            .u64(self.sender.0)
            .u64(self.sim_time)
            .bytes(&self.payload);
    }

    fn decode(r: &mut Reader<'_>) -> Result<Self, DecodeError> {
        Ok(Transaction {
            tx_id: TxId(r.u64()?),
            sender: AccountId(r.u64()?),
            sim_time: r.u64()?,
            payload: r.bytes()?.to_vec(),
        })
    }
}

/// Digest over the canonical encoding of `txs`, in order.
pub fn body_hash(txs: &[Transaction]) -> Hash256 {
    let mut w = Writer::new();
    w.u32(txs.len() as u32);
    for tx in txs {
        tx.encode_into(&mut w);
    }
    Hash256::of(&w.finish())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub height: u64,
    pub prev_hash: Hash256,
    pub body_hash: Hash256,
    pub sealed_at: SimTime,
    pub hash_alg: u8,
    pub transactions: Vec<Transaction>,
    /// Digest of this block's header as computed when it was sealed.
    pub hash: Hash256,
}

impl Block {
    fn header_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new();
        w.u64(self.height)
            .raw(&self.prev_hash.0)
            .raw(&self.body_hash.0)
            .u64(self.sealed_at)
            .u8(self.hash_alg)
            .u32(self.transactions.len() as u32);
        w.finish()
    }

    /// Full digest of the block header. The header commits to the body hash,
    /// so this covers every transaction byte.
    pub fn compute_hash(&self) -> Hash256 {
        Hash256::of(&self.header_bytes())
    }

    fn new_sealed(height: u64, prev_hash: Hash256, sealed_at: SimTime, transactions: Vec<Transaction>) -> Self {
        let mut block = Block {
            height,
            prev_hash,
            body_hash: body_hash(&transactions),
            sealed_at,
            hash_alg: HASH_ALG_SHA256,
            transactions,
            hash: Hash256::ZERO,
        };
        block.hash = block.compute_hash();
        block
    }

    /// Canonical binary form: header, stored hash, then transactions.
    pub fn to_canonical_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new();
        w.raw(&self.header_bytes()).raw(&self.hash.0);
        for tx in &self.transactions {
            tx.encode_into(&mut w);
        }
        w.finish()
    }

    pub fn from_canonical_bytes(bytes: &[u8]) -> Result<Self, DecodeError> {
        let mut r = Reader::new(bytes);
        let height = r.u64()?;
        let prev_hash = Hash256(r.array32()?);
        let body = Hash256(r.array32()?);
        let sealed_at = r.u64()?;
        let hash_alg = r.u8()?;
        let count = r.u32()? as usize;
        let hash = Hash256(r.array32()?);
        // Each transaction needs at least 28 bytes; reject absurd counts early.
        if count > r.remaining() / 28 {
            return Err(DecodeError::Invalid("transaction count exceeds block size"));
        }
        let mut transactions = Vec::with_capacity(count);
        for _ in 0..count {
            transactions.push(Transaction::decode(&mut r)?);
        }
        r.finish()?;
        Ok(Block {
            height,
            prev_hash,
            body_hash: body,
            sealed_at,
            hash_alg,
            transactions,
            hash,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EventKind {
    IncidentReported,
    EvidenceSubmitted,
    TrustScoreRequested,
    TrustScoreDelivered,
    RequestRefunded,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum EventPayload {
    IncidentReported(Incident),
    EvidenceSubmitted(Review),
    TrustScoreRequested(TrustRequest),
    TrustScoreDelivered(TrustScoreRecord),
    RequestRefunded(TrustRequest),
}

impl EventPayload {
    pub fn kind(&self) -> EventKind {
        match self {
            EventPayload::IncidentReported(_) => EventKind::IncidentReported,
            EventPayload::EvidenceSubmitted(_) => EventKind::EvidenceSubmitted,
            EventPayload::TrustScoreRequested(_) => EventKind::TrustScoreRequested,
            EventPayload::TrustScoreDelivered(_) => EventKind::TrustScoreDelivered,
            EventPayload::RequestRefunded(_) => EventKind::RequestRefunded,
        }
    }

    pub fn subject_id(&self) -> u64 {
        match self {
            EventPayload::IncidentReported(i) => i.incident_id.0,
            EventPayload::EvidenceSubmitted(r) => r.review_id.0,
            EventPayload::TrustScoreRequested(req) | EventPayload::RequestRefunded(req) => req.request_id.0,
            EventPayload::TrustScoreDelivered(rec) => rec.request_id.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LedgerEvent {
    pub event_seq: u64,
    pub kind: EventKind,
    pub subject_id: u64,
    pub emitted_at: SimTime,
    pub tx_id: TxId,
    pub payload: EventPayload,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LedgerConfig {
    /// Seal at every multiple of this many simulated seconds; 0 disables
    /// interval sealing.
    pub block_interval_s: u64,
    pub block_capacity: usize,
}

impl Default for LedgerConfig {
    fn default() -> Self {
        Self {
            block_interval_s: 12,
            block_capacity: 200,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Ledger {
    config: LedgerConfig,
    blocks: Vec<Block>,
    pending: Vec<(Transaction, Option<EventPayload>)>,
    events: Vec<LedgerEvent>,
    next_tx: u64,
    clock: SimTime,
}

impl Ledger {
    /// Creates a ledger holding only the genesis block (height 0, zero
    /// `prev_hash`, no transactions, sealed at time 0).
    pub fn new(config: LedgerConfig) -> Self {
        assert!(config.block_capacity > 0, "block capacity must be positive");
        Ledger {
            config,
            blocks: vec![Block::new_sealed(0, Hash256::ZERO, 0, Vec::new())],
            pending: Vec::new(),
            events: Vec::new(),
            next_tx: 1,
            clock: 0,
        }
    }

    pub fn config(&self) -> LedgerConfig {
        self.config
    }

    pub(crate) fn set_config(&mut self, config: LedgerConfig) {
        self.config = config;
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn height(&self) -> u64 {
        self.blocks.len() as u64 - 1
    }

    pub fn pending_len(&self) -> usize {
        self.pending.len()
    }

    /// Latest accepted simulation time.
    pub fn clock(&self) -> SimTime {
        self.clock
    }

    pub fn check_time(&self, sim_time: SimTime) -> Result<(), LedgerError> {
        if sim_time < self.clock {
            return Err(LedgerError::ClockRegression {
                got: sim_time,
                last: self.clock,
            });
        }
        Ok(())
    }

    pub fn append_transaction(&mut self, sender: AccountId, payload: Vec<u8>, sim_time: SimTime) -> Result<TxId, LedgerError> {
        self.append_with_event(sender, payload, sim_time, None)
    }

    /// Queues a transaction and the event it will publish once sealed.
    pub fn append_with_event(
        &mut self,
        sender: AccountId,
        payload: Vec<u8>,
        sim_time: SimTime,
        event: Option<EventPayload>,
    ) -> Result<TxId, LedgerError> {
        if payload.is_empty() {
            return Err(LedgerError::EmptyPayload);
        }
        self.check_time(sim_time)?;
        self.tick(sim_time);
        let tx_id = TxId(self.next_tx);
        self.next_tx += 1;
        self.clock = sim_time;
        self.pending.push((
            Transaction {
                tx_id,
                sender,
                payload,
                sim_time,
            },
            event,
        ));
        if self.pending.len() >= self.config.block_capacity {
            self.seal_block(sim_time);
        }
        Ok(tx_id)
    }

    /// Advances the clock, sealing the pending pool if an interval boundary
    /// was crossed. Empty intervals produce no blocks. Returns the number of
    /// blocks sealed.
    pub fn tick(&mut self, now: SimTime) -> usize {
        let interval = self.config.block_interval_s;
        if interval == 0 || now < self.clock {
            return 0;
        }
        let last_boundary = now / interval * interval;
        if !self.pending.is_empty() && last_boundary > self.pending[0].0.sim_time {
            // Seal at the first boundary after the oldest pending transaction.
            let first = (self.pending[0].0.sim_time / interval + 1) * interval;
            self.seal_block(first);
            return 1;
        }
        0
    }

    /// Seals the pending pool into a new block (possibly empty) and publishes
    /// the queued events. `sim_time` earlier than the ledger clock is raised
    /// to the clock.
    pub fn seal_block(&mut self, sim_time: SimTime) -> &Block {
        let sealed_at = sim_time.max(self.clock);
        self.clock = sealed_at;
        let prev = self.blocks.last().expect("genesis exists");
        let height = prev.height + 1;
        let prev_hash = prev.hash;
        let mut txs = Vec::with_capacity(self.pending.len());
        for (tx, event) in self.pending.drain(..) {
            if let Some(payload) = event {
                self.events.push(LedgerEvent {
                    event_seq: self.events.len() as u64 + 1,
                    kind: payload.kind(),
                    subject_id: payload.subject_id(),
                    emitted_at: sealed_at,
                    tx_id: tx.tx_id,
                    payload,
                });
            }
            txs.push(tx);
        }
        self.blocks.push(Block::new_sealed(height, prev_hash, sealed_at, txs));
        self.blocks.last().expect("just pushed")
    }

    /// Seals the pending pool if it is non-empty.
    pub fn flush(&mut self, sim_time: SimTime) -> Option<&Block> {
        if self.pending.is_empty() {
            None
        } else {
            Some(self.seal_block(sim_time))
        }
    }

    /// All events with `event_seq > cursor`, in order.
    pub fn events_since(&self, cursor: u64) -> &[LedgerEvent] {
        let start = (cursor as usize).min(self.events.len());
        &self.events[start..]
    }

    pub fn last_event_seq(&self) -> u64 {
        self.events.len() as u64
    }

    pub fn transaction(&self, tx_id: TxId) -> Option<&Transaction> {
        self.blocks
            .iter()
            .flat_map(|b| b.transactions.iter())
            .chain(self.pending.iter().map(|(tx, _)| tx))
            .find(|tx| tx.tx_id == tx_id)
    }

    pub fn verify_chain(&self) -> bool {
        verify_blocks(&self.blocks).is_ok()
    }

    pub fn to_dump(&self) -> Vec<u8> {
        encode_dump(&self.blocks)
    }
}

/// Why a chain failed verification, and at which height.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainFault {
    #[error("chain is empty")]
    Empty,
    #[error("block {height}: height field does not match position")]
    Height { height: u64 },
    #[error("block {height}: unknown hash algorithm {alg}")]
    HashAlgorithm { height: u64, alg: u8 },
    #[error("block {height}: body hash mismatch")]
    BodyHash { height: u64 },
    #[error("block {height}: stored block hash mismatch")]
    BlockHash { height: u64 },
    #[error("block {height}: prev_hash does not link to predecessor")]
    Link { height: u64 },
    #[error("block {height}: transaction ids not strictly increasing")]
    TxOrder { height: u64 },
    #[error("block {height}: undecodable block record")]
    Undecodable { height: u64 },
}

impl ChainFault {
    pub fn height(&self) -> Option<u64> {
        match *self {
            ChainFault::Empty => None,
            ChainFault::Height { height }
            | ChainFault::HashAlgorithm { height, .. }
            | ChainFault::BodyHash { height }
            | ChainFault::BlockHash { height }
            | ChainFault::Link { height }
            | ChainFault::TxOrder { height }
            | ChainFault::Undecodable { height } => Some(height),
        }
    }
}

/// Recomputes every body hash, block hash and link from genesis onward and
/// reports the first fault found.
pub fn verify_blocks(blocks: &[Block]) -> Result<(), ChainFault> {
    if blocks.is_empty() {
        return Err(ChainFault::Empty);
    }
    let genesis_alg = blocks[0].hash_alg;
    let mut last_tx: Option<TxId> = None;
    for (i, block) in blocks.iter().enumerate() {
        let height = i as u64;
        if block.height != height {
            return Err(ChainFault::Height { height });
        }
        if block.hash_alg != HASH_ALG_SHA256 || block.hash_alg != genesis_alg {
            return Err(ChainFault::HashAlgorithm {
                height,
                alg: block.hash_alg,
            });
        }
        let expected_prev = if i == 0 { Hash256::ZERO } else { blocks[i - 1].compute_hash() };
        if block.prev_hash != expected_prev {
            return Err(ChainFault::Link { height });
        }
        if body_hash(&block.transactions) != block.body_hash {
            return Err(ChainFault::BodyHash { height });
        }
        if block.compute_hash() != block.hash {
            return Err(ChainFault::BlockHash { height });
        }
        for tx in &block.transactions {
            if last_tx.is_some_and(|prev| tx.tx_id <= prev) {
                return Err(ChainFault::TxOrder { height });
            }
            last_tx = Some(tx.tx_id);
        }
    }
    Ok(())
}

/// Canonical chain dump: magic, block count, then one u32-length-prefixed
/// canonical block record per block.
pub fn encode_dump(blocks: &[Block]) -> Vec<u8> {
    let mut w = Writer::new();
    w.raw(DUMP_MAGIC).u64(blocks.len() as u64);
    for block in blocks {
        w.bytes(&block.to_canonical_bytes());
    }
    w.finish()
}

/// A dump whose framing parsed. Blocks whose record failed to decode are
/// kept as `Err` so the fault can be attributed to a height.
#[derive(Debug)]
pub struct ParsedDump {
    pub blocks: Vec<Result<Block, DecodeError>>,
}

impl ParsedDump {
    pub fn verify(&self) -> Result<Vec<Block>, ChainFault> {
        let mut blocks = Vec::with_capacity(self.blocks.len());
        for (i, b) in self.blocks.iter().enumerate() {
            match b {
                Ok(block) => blocks.push(block.clone()),
                Err(_) => {
                    // A fault earlier in the chain takes precedence.
                    if !blocks.is_empty() {
                        verify_blocks(&blocks)?;
                    }
                    return Err(ChainFault::Undecodable { height: i as u64 });
                }
            }
        }
        verify_blocks(&blocks).map(|_| blocks)
    }
}

/// Parses the dump framing. Fails only when the file itself is malformed
/// (bad magic, truncated, trailing bytes).
pub fn parse_dump(bytes: &[u8]) -> Result<ParsedDump, DecodeError> {
    let mut r = Reader::new(bytes);
    if r.take(DUMP_MAGIC.len())? != DUMP_MAGIC {
        return Err(DecodeError::Invalid("bad dump magic"));
    }
    let count = r.u64()?;
    if count > (r.remaining() / 4) as u64 {
        return Err(DecodeError::Invalid("block count exceeds dump size"));
    }
    let mut blocks = Vec::with_capacity(count as usize);
    for _ in 0..count {
        blocks.push(Block::from_canonical_bytes(r.bytes()?));
    }
    r.finish()?;
    Ok(ParsedDump { blocks })
}

#[derive(Debug, Serialize)]
struct BlockDebugLine {
    height: u64,
    prev_hash: String,
    body_hash: String,
    hash: String,
    sealed_at: SimTime,
    tx_ids: Vec<u64>,
}

/// JSON-lines debug export, one block per line.
pub fn debug_export(blocks: &[Block]) -> String {
    let mut out = String::new();
    for b in blocks {
        let line = BlockDebugLine {
            height: b.height,
            prev_hash: b.prev_hash.to_hex(),
            body_hash: b.body_hash.to_hex(),
            hash: b.hash.to_hex(),
            sealed_at: b.sealed_at,
            tx_ids: b.transactions.iter().map(|t| t.tx_id.0).collect(),
        };
        out.push_str(&serde_json::to_string(&line).expect("debug line serializes"));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn manual() -> Ledger {
        Ledger::new(LedgerConfig {
            block_interval_s: 0,
            block_capacity: 200,
        })
    }

    #[test]
    fn first_transaction_lands_in_block_one() {
        let mut l = manual();
        let id = l.append_transaction(AccountId(1), vec![1, 2, 3], 0).unwrap();
        assert_eq!(id, TxId(1));
        assert_eq!(l.height(), 0);
        let block = l.seal_block(0).clone();
        assert_eq!(block.height, 1);
        assert_eq!(block.transactions[0].tx_id, id);
        assert!(l.transaction(id).is_some());
    }

    #[test]
    fn empty_payload_rejected() {
        let mut l = manual();
        assert_eq!(l.append_transaction(AccountId(1), vec![], 5), Err(LedgerError::EmptyPayload));
    }

    #[test]
    fn clock_regression_rejected() {
        let mut l = manual();
        l.append_transaction(AccountId(1), vec![1], 10).unwrap();
        assert_eq!(
            l.append_transaction(AccountId(1), vec![1], 9),
            Err(LedgerError::ClockRegression { got: 9, last: 10 })
        );
    }

    #[test]
    fn batch_of_1000_spans_five_blocks_in_order() {
        let mut l = manual();
        for i in 0..1000u64 {
            l.append_transaction(AccountId(i % 7), i.to_be_bytes().to_vec(), i).unwrap();
        }
        l.flush(1000);
        // capacity 200 => ceil(1000 / 200) = 5
        assert_eq!(l.height(), 5);
        let ids: Vec<u64> = l.blocks().iter().flat_map(|b| b.transactions.iter().map(|t| t.tx_id.0)).collect();
        assert_eq!(ids, (1..=1000).collect::<Vec<_>>());
        assert!(l.blocks()[1..].iter().all(|b| b.transactions.len() == 200));
    }

    #[test]
    fn empty_seal_and_order_and_links() {
        let mut l = manual();
        l.seal_block(1);
        assert_eq!(l.height(), 1);
        assert!(l.blocks()[1].transactions.is_empty());
        for i in 0..3u8 {
            l.append_transaction(AccountId(2), vec![i], 2).unwrap();
        }
        l.seal_block(3);
        let b = &l.blocks()[2];
        assert_eq!(b.transactions.iter().map(|t| t.payload[0]).collect::<Vec<_>>(), vec![0, 1, 2]);
        assert_eq!(b.prev_hash, l.blocks()[1].compute_hash());
        assert_eq!(l.blocks()[0].prev_hash, Hash256::ZERO);
        assert_eq!(l.blocks()[0].hash_alg, HASH_ALG_SHA256);
    }

    #[test]
    fn interval_sealing_skips_empty_intervals() {
        let mut l = Ledger::new(LedgerConfig {
            block_interval_s: 12,
            block_capacity: 200,
        });
        l.append_transaction(AccountId(1), vec![1], 1).unwrap();
        l.append_transaction(AccountId(1), vec![2], 11).unwrap();
        assert_eq!(l.height(), 0);
        l.append_transaction(AccountId(1), vec![3], 100).unwrap();
        assert_eq!(l.height(), 1);
        assert_eq!(l.blocks()[1].sealed_at, 12);
        assert_eq!(l.blocks()[1].transactions.len(), 2);
        assert_eq!(l.tick(107), 0);
        assert_eq!(l.tick(108), 1);
        assert_eq!(l.blocks()[2].sealed_at, 108);
    }

    fn ten_block_chain() -> Ledger {
        let mut l = manual();
        for h in 0..10u64 {
            for j in 0..3u64 {
                l.append_transaction(AccountId(j), vec![h as u8, j as u8, 0xAA], h).unwrap();
            }
            l.seal_block(h);
        }
        l
    }

    #[test]
    fn untampered_chain_verifies() {
        assert!(ten_block_chain().verify_chain());
    }

    #[test]
    fn flipped_transaction_byte_detected() {
        let l = ten_block_chain();
        let mut blocks = l.blocks().to_vec();
        blocks[4].transactions[1].payload[2] ^= 0x01;
        assert_eq!(verify_blocks(&blocks), Err(ChainFault::BodyHash { height: 4 }));
    }

    #[test]
    fn rehashed_forgery_breaks_successor_link() {
        let l = ten_block_chain();
        let mut blocks = l.blocks().to_vec();
        let forged = &mut blocks[5];
        forged.transactions[0].payload = vec![0xFF];
        forged.body_hash = body_hash(&forged.transactions);
        forged.hash = forged.compute_hash();
        assert_eq!(verify_blocks(&blocks), Err(ChainFault::Link { height: 6 }));
    }

    #[test]
    fn tip_header_tamper_detected() {
        let l = ten_block_chain();
        let mut blocks = l.blocks().to_vec();
        blocks.last_mut().unwrap().sealed_at += 1;
        assert_eq!(verify_blocks(&blocks), Err(ChainFault::BlockHash { height: 10 }));
    }

    #[test]
    fn events_since_on_empty_ledger() {
        assert!(manual().events_since(0).is_empty());
    }

    #[test]
    fn dump_round_trip_and_truncation() {
        let l = ten_block_chain();
        let dump = l.to_dump();
        let parsed = parse_dump(&dump).unwrap();
        assert_eq!(parsed.verify().unwrap(), l.blocks());
        assert!(parse_dump(&dump[..dump.len() - 5]).is_err());
        assert!(parse_dump(b"").is_err());
    }

    #[test]
    fn undecodable_block_attributed_to_height() {
        let l = ten_block_chain();
        let mut blocks: Vec<Vec<u8>> = l.blocks().iter().map(Block::to_canonical_bytes).collect();
        // Corrupt the transaction count of block 3, keeping outer framing.
        blocks[3][8 + 32 + 32 + 8 + 1 + 3] ^= 0x40;
        let mut w = Writer::new();
        w.raw(DUMP_MAGIC).u64(blocks.len() as u64);
        for b in &blocks {
            w.bytes(b);
        }
        let parsed = parse_dump(&w.finish()).unwrap();
        assert_eq!(parsed.verify().unwrap_err().height(), Some(3));
    }

    #[test]
    fn debug_export_has_one_line_per_block() {
        let l = ten_block_chain();
        let text = debug_export(l.blocks());
        assert_eq!(text.lines().count(), 11);
        let first: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
        assert_eq!(first["prev_hash"], "0".repeat(64));
    }
}
