//! Journal-backed service core hosting the authority domain and ledger.
//!
//! Every mutating operation appends its events to the journal before
//! returning, and `open` rebuilds the exact same state by replaying the
//! file, so restarts answer identically to the process that wrote it.

use std::time::{SystemTime, UNIX_EPOCH};

use thiserror::Error;

use vpki_core::authorities::{
    AuthorityCerts, AuthorizeError, EnrollError, MisbehaviorReport, VpkiSystem,
};
use vpki_core::certkit::{CanonicalId, Certificate, HashedId, HashedIdLength, PublicKey};
use vpki_core::station::{check_hash_against_ledger, RevocationStatus};
use vpki_core::tangle::{LatencyModel, TryteAddress, ZeroValueTransaction};

use crate::config::ServiceConfig;
use crate::journal::{read_journal, Journal, JournalError, JournalEvent};

#[derive(Debug, Error)]
pub enum ServiceError {
    #[error("{0}")]
    Malformed(String),
    #[error("{0}")]
    Rejected(String),
    #[error("{0}")]
    NotFound(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl From<JournalError> for ServiceError {
    fn from(e: JournalError) -> Self {
        Self::Internal(format!("journal append failed: {e}"))
    }
}

fn now_unix_ms() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .expect("clock before epoch")
        .as_millis() as u64
}

/// Result of a misbehavior report.
#[derive(Clone, Debug)]
pub struct ReportOutcome {
    pub duplicate: bool,
    pub tx_id: Option<HashedId>,
    pub queryable_time_ms: Option<u64>,
    pub resolved: Option<bool>,
}

pub struct ServiceCore {
    system: VpkiSystem,
    journal: Journal,
    ra_cert: Certificate,
}

impl ServiceCore {
    /// Opens (or creates) the store at `config.store_path`. A non-empty
    /// journal is replayed and its bootstrap parameters win over the
    /// config, keeping key material and hash length stable across
    /// restarts.
    pub fn open(config: &ServiceConfig) -> anyhow::Result<Self> {
        let events = read_journal(&config.store_path)?;
        let system = if events.is_empty() {
            let params = config.bootstrap_config()?;
            let system = VpkiSystem::bootstrap(params, config.publish_latency_model);
            let mut journal = Journal::open_append(&config.store_path)?;
            journal.append(&JournalEvent::bootstrap(&params))?;
            let ra_cert = system.certs().ra;
            return Ok(Self {
                system,
                journal,
                ra_cert,
            });
        } else {
            Self::replay(&events, config.publish_latency_model)?
        };
        let journal = Journal::open_append(&config.store_path)?;
        let ra_cert = system.certs().ra;
        Ok(Self {
            system,
            journal,
            ra_cert,
        })
    }

    fn replay(events: &[JournalEvent], latency: LatencyModel) -> Result<VpkiSystem, JournalError> {
        let JournalEvent::Bootstrap {
            seed,
            not_before,
            not_after,
            hash_len,
            ltc_validity_s,
            stc_validity_s,
        } = events[0]
        else {
            return Err(JournalError::MissingBootstrap);
        };
        let params = vpki_core::authorities::BootstrapConfig {
            seed,
            not_before,
            not_after,
            hash_len,
            ltc_validity_s,
            stc_validity_s,
        };
        let mut system = VpkiSystem::bootstrap(params, latency);
        let mut authorize_count = 0u64;
        for event in &events[1..] {
            match event {
                JournalEvent::Bootstrap { .. } => {
                    return Err(JournalError::Malformed {
                        line: 0,
                        reason: "second bootstrap event".into(),
                    })
                }
                JournalEvent::Prereg { id } => {
                    system.restore_prereg(id.clone());
                }
                JournalEvent::Enroll {
                    ltc_hash,
                    id,
                    issue_time,
                } => system.restore_ltc_record(*ltc_hash, id.clone(), *issue_time),
                JournalEvent::Authorize {
                    stc_hash,
                    ltc_hash,
                    issue_time,
                } => {
                    authorize_count += 1;
                    system.restore_stc_record(*stc_hash, *ltc_hash, *issue_time);
                }
                JournalEvent::Report { stc_hash } => system.restore_processed_report(*stc_hash),
                JournalEvent::Ban { id, ban_time } => system.restore_ban(id.clone(), *ban_time),
                JournalEvent::Attach {
                    address,
                    attach_time_ms,
                    queryable_time_ms,
                    payload,
                } => {
                    let tx =
                        ZeroValueTransaction::new(*address, payload.clone(), *attach_time_ms);
                    system.ledger().restore_tx(tx, *queryable_time_ms);
                }
            }
        }
        system.reseed_pseudonym_rng(authorize_count);
        Ok(system)
    }

    pub fn hash_len(&self) -> HashedIdLength {
        self.system.hash_len()
    }

    pub fn certs(&self) -> AuthorityCerts {
        self.system.certs()
    }

    /// Parses a hex certificate hash and enforces the configured length.
    pub fn parse_hash(&self, hex_str: &str) -> Result<HashedId, ServiceError> {
        let hash = HashedId::from_hex(hex_str)
            .ok_or_else(|| ServiceError::Malformed(format!("bad hash hex `{hex_str}`")))?;
        if hash.length() != self.hash_len() {
            return Err(ServiceError::Malformed(format!(
                "hash is {} bytes, service uses {}",
                hash.length().len(),
                self.hash_len().len()
            )));
        }
        Ok(hash)
    }

    pub fn preregister(&mut self, id: CanonicalId) -> Result<bool, ServiceError> {
        let newly = self.system.preregister(id.clone());
        if newly {
            self.journal.append(&JournalEvent::Prereg { id })?;
        }
        Ok(newly)
    }

    pub fn enroll(
        &mut self,
        id: &CanonicalId,
        vehicle_pk: &PublicKey,
    ) -> Result<Certificate, ServiceError> {
        let now_s = now_unix_ms() / 1000;
        let ltc = self
            .system
            .enroll(id, vehicle_pk, now_s)
            .map_err(|e| match e {
                EnrollError::BannedSubject => ServiceError::Rejected(e.to_string()),
                EnrollError::NotPreRegistered => ServiceError::NotFound(e.to_string()),
            })?;
        self.journal.append(&JournalEvent::Enroll {
            ltc_hash: ltc.hashed_id(self.hash_len()),
            id: id.clone(),
            issue_time: now_s,
        })?;
        Ok(ltc)
    }

    pub fn authorize(
        &mut self,
        ltc: &Certificate,
        vehicle_pk: &PublicKey,
    ) -> Result<Certificate, ServiceError> {
        let now_s = now_unix_ms() / 1000;
        let stc = self
            .system
            .authorize(ltc, vehicle_pk, now_s)
            .map_err(|e| match e {
                AuthorizeError::LtcaRejected
                | AuthorizeError::ExpiredLtc
                | AuthorizeError::BadChain => ServiceError::Rejected(e.to_string()),
            })?;
        self.journal.append(&JournalEvent::Authorize {
            stc_hash: stc.hashed_id(self.hash_len()),
            ltc_hash: ltc.hashed_id(self.hash_len()),
            issue_time: now_s,
        })?;
        Ok(stc)
    }

    pub fn report(
        &mut self,
        stc_hash: HashedId,
        evidence: Vec<u8>,
        reporter: String,
    ) -> Result<ReportOutcome, ServiceError> {
        let now_s = now_unix_ms() / 1000;
        let Some(outcome) = self.system.report_misbehavior(MisbehaviorReport {
            reported_stc_hash: stc_hash,
            evidence,
            reporter,
            report_time: now_s,
        }) else {
            return Ok(ReportOutcome {
                duplicate: true,
                tx_id: None,
                queryable_time_ms: None,
                resolved: None,
            });
        };

        self.journal.append(&JournalEvent::Report { stc_hash })?;
        self.journal.append(&JournalEvent::Attach {
            address: outcome.tx.address,
            attach_time_ms: outcome.tx.attach_time_ms,
            queryable_time_ms: outcome.receipt.queryable_time_ms,
            payload: outcome.tx.payload.clone(),
        })?;
        let resolved = match &outcome.resolution {
            Ok(id) => {
                self.journal.append(&JournalEvent::Ban {
                    id: id.clone(),
                    ban_time: now_s,
                })?;
                true
            }
            Err(_) => false,
        };
        Ok(ReportOutcome {
            duplicate: false,
            tx_id: Some(outcome.receipt.tx_id),
            queryable_time_ms: Some(outcome.receipt.queryable_time_ms),
            resolved: Some(resolved),
        })
    }

    pub fn resolve(&mut self, stc_hash: HashedId) -> Result<CanonicalId, ServiceError> {
        let now_s = now_unix_ms() / 1000;
        let id = self
            .system
            .resolve_identity(&stc_hash, now_s)
            .map_err(|e| ServiceError::NotFound(e.to_string()))?;
        self.journal.append(&JournalEvent::Ban {
            id: id.clone(),
            ban_time: now_s,
        })?;
        Ok(id)
    }

    /// Ad-hoc revocation of a certificate hash, outside the report flow.
    pub fn revoke(&mut self, cert_hash: HashedId) -> Result<(HashedId, u64), ServiceError> {
        let now_ms = now_unix_ms();
        let (tx, receipt) = self.system.publish_revocation(&cert_hash, now_ms);
        self.journal.append(&JournalEvent::Attach {
            address: tx.address,
            attach_time_ms: tx.attach_time_ms,
            queryable_time_ms: receipt.queryable_time_ms,
            payload: tx.payload,
        })?;
        Ok((receipt.tx_id, receipt.queryable_time_ms))
    }

    /// Current revocation status of a hash, filtered to RA-signed payloads
    /// exactly like a station's check.
    pub fn revocation_status(&self, cert_hash: &HashedId) -> RevocationStatus {
        check_hash_against_ledger(
            self.system.ledger(),
            &self.ra_cert,
            self.hash_len(),
            cert_hash,
            now_unix_ms(),
        )
    }

    /// Transactions currently queryable at an address.
    pub fn ledger_transactions(&self, address: &TryteAddress) -> Vec<ZeroValueTransaction> {
        self.system.ledger().find_transactions(address, now_unix_ms())
    }
}
