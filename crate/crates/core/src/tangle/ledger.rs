//! Permanent, address-indexed transaction store.
//!
//! The ledger is a single-process stand-in for the distributed DAG: an
//! append-only log indexed by address. Attached transactions become
//! queryable after a delay drawn from the configured latency model and
//! are never dropped, including across `snapshot_compact`, which models
//! the permanode guarantee.

use std::collections::HashMap;
use std::io::{self, BufRead, Write};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::RwLock;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use thiserror::Error;

use crate::certkit::HashedId;

use super::latency::LatencyModel;
use super::transaction::ZeroValueTransaction;
use super::trytes::TryteAddress;

#[derive(Debug, Error)]
pub enum DumpError {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("dump line {line} is malformed: {reason}")]
    Malformed { line: usize, reason: String },
}

/// Attachment receipt: the transaction id and the virtual time from which
/// queries observe the transaction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AttachReceipt {
    pub tx_id: HashedId,
    pub queryable_time_ms: u64,
}

struct StoredTx {
    tx: ZeroValueTransaction,
    queryable_time_ms: u64,
}

struct Inner {
    log: Vec<StoredTx>,
    by_address: HashMap<TryteAddress, Vec<usize>>,
    latency: LatencyModel,
    rng: ChaCha20Rng,
}

/// Append-only address-indexed ledger, safe for concurrent attach/query.
pub struct Ledger {
    inner: RwLock<Inner>,
    queries: AtomicU64,
}

impl Ledger {
    pub fn new(latency: LatencyModel, seed: u64) -> Self {
        Self {
            inner: RwLock::new(Inner {
                log: Vec::new(),
                by_address: HashMap::new(),
                latency,
                rng: ChaCha20Rng::seed_from_u64(seed),
            }),
            queries: AtomicU64::new(0),
        }
    }

    /// Appends a transaction. Its queryable time is the attach time plus a
    /// sampled latency-model delay (rounded to whole milliseconds).
    pub fn attach(&self, tx: ZeroValueTransaction) -> AttachReceipt {
        let mut guard = self.inner.write().unwrap();
        let inner = &mut *guard;
        let delay_ms = inner.latency.sample(&mut inner.rng).round() as u64;
        let queryable_time_ms = tx.attach_time_ms + delay_ms;
        let receipt = AttachReceipt {
            tx_id: tx.tx_id,
            queryable_time_ms,
        };
        Self::push(inner, tx, queryable_time_ms);
        receipt
    }

    /// Re-inserts a transaction with a known queryable time (journal replay
    /// and dump restore).
    pub fn restore_tx(&self, tx: ZeroValueTransaction, queryable_time_ms: u64) {
        let mut inner = self.inner.write().unwrap();
        Self::push(&mut inner, tx, queryable_time_ms);
    }

    fn push(inner: &mut Inner, tx: ZeroValueTransaction, queryable_time_ms: u64) {
        let index = inner.log.len();
        inner.by_address.entry(tx.address).or_default().push(index);
        inner.log.push(StoredTx {
            tx,
            queryable_time_ms,
        });
    }

    /// Returns the transactions attached to `address` that are queryable at
    /// `at_ms`, in attach order. Unknown addresses yield an empty list.
    pub fn find_transactions(&self, address: &TryteAddress, at_ms: u64) -> Vec<ZeroValueTransaction> {
        self.queries.fetch_add(1, Ordering::Relaxed);
        let inner = self.inner.read().unwrap();
        match inner.by_address.get(address) {
            None => Vec::new(),
            Some(indices) => indices
                .iter()
                .map(|&i| &inner.log[i])
                .filter(|stored| stored.queryable_time_ms <= at_ms)
                .map(|stored| stored.tx.clone())
                .collect(),
        }
    }

    /// Total `find_transactions` calls served, for constant-work assertions.
    pub fn query_count(&self) -> u64 {
        self.queries.load(Ordering::Relaxed)
    }

    /// Models a ledger snapshot under the permanode guarantee: the index is
    /// rebuilt from the log and every query answer is unchanged.
    pub fn snapshot_compact(&self) {
        let mut inner = self.inner.write().unwrap();
        let mut rebuilt: HashMap<TryteAddress, Vec<usize>> = HashMap::new();
        for (index, stored) in inner.log.iter().enumerate() {
            rebuilt.entry(stored.tx.address).or_default().push(index);
        }
        inner.by_address = rebuilt;
        inner.log.shrink_to_fit();
    }

    pub fn len(&self) -> usize {
        self.inner.read().unwrap().log.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Writes the full log, one transaction per line: address, tx id,
    /// attach time, queryable time, and hex payload, tab-separated.
    pub fn dump<W: Write>(&self, mut w: W) -> io::Result<()> {
        let inner = self.inner.read().unwrap();
        for stored in &inner.log {
            writeln!(
                w,
                "{}\t{}\t{}\t{}\t{}",
                stored.tx.address,
                stored.tx.tx_id.to_hex(),
                stored.tx.attach_time_ms,
                stored.queryable_time_ms,
                hex::encode(&stored.tx.payload),
            )?;
        }
        Ok(())
    }

    /// Rebuilds a ledger from a dump, validating address format and the
    /// tx-id/payload hash invariant on every line.
    pub fn restore<R: BufRead>(r: R, latency: LatencyModel, seed: u64) -> Result<Self, DumpError> {
        let ledger = Ledger::new(latency, seed);
        for (line_no, line) in r.lines().enumerate() {
            let line = line?;
            if line.is_empty() {
                continue;
            }
            let malformed = |reason: &str| DumpError::Malformed {
                line: line_no + 1,
                reason: reason.to_string(),
            };
            let mut fields = line.split('\t');
            let mut next = |name: &str| {
                fields
                    .next()
                    .ok_or_else(|| malformed(&format!("missing field `{name}`")))
            };
            let address = TryteAddress::parse(next("address")?)
                .map_err(|e| malformed(&e.to_string()))?;
            let tx_id = HashedId::from_hex(next("tx_id")?)
                .ok_or_else(|| malformed("bad tx id hex"))?;
            let attach_time_ms: u64 = next("attach_time")?
                .parse()
                .map_err(|_| malformed("bad attach time"))?;
            let queryable_time_ms: u64 = next("queryable_time")?
                .parse()
                .map_err(|_| malformed("bad queryable time"))?;
            let payload =
                hex::decode(next("payload")?).map_err(|_| malformed("bad payload hex"))?;
            if fields.next().is_some() {
                return Err(malformed("trailing fields"));
            }
            let tx = ZeroValueTransaction::new(address, payload, attach_time_ms);
            if tx.tx_id != tx_id {
                return Err(malformed("tx id does not match payload hash"));
            }
            ledger.restore_tx(tx, queryable_time_ms);
        }
        Ok(ledger)
    }
}
