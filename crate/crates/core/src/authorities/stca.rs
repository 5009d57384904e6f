//! Short-term certification authority: pseudonym issuance.

use std::collections::HashMap;

use rand::RngExt;
use rand_chacha::ChaCha20Rng;

use crate::certkit::{
    issue_certificate, verify_chain, Certificate, CertificateKind, HashedId, HashedIdLength,
    KeyPair, PublicKey,
};

use super::ltca::Ltca;
use super::{AuthorizeError, IssuanceRecord};

/// Length of a pseudonym subject identifier in bytes.
const PSEUDONYM_LEN: usize = 16;

/// Authorization authority. Issues short-term pseudonym certificates after
/// the LTCA accepts the backing long-term certificate. Its records never
/// contain canonical identities.
pub struct Stca {
    cert: Certificate,
    keypair: KeyPair,
    hash_len: HashedIdLength,
    stc_validity_s: u64,
    records: HashMap<HashedId, IssuanceRecord>,
    record_order: Vec<HashedId>,
    rng: ChaCha20Rng,
}

impl Stca {
    pub(super) fn new(
        cert: Certificate,
        keypair: KeyPair,
        hash_len: HashedIdLength,
        stc_validity_s: u64,
        rng: ChaCha20Rng,
    ) -> Self {
        Self {
            cert,
            keypair,
            hash_len,
            stc_validity_s,
            records: HashMap::new(),
            record_order: Vec::new(),
            rng,
        }
    }

    pub fn certificate(&self) -> &Certificate {
        &self.cert
    }

    /// Issues a pseudonym certificate for `vehicle_pk` backed by `ltc`.
    ///
    /// Pipeline: validity window of the LTC, then its signature chain, then
    /// the LTCA's acceptance (which covers the ban list). The pseudonym
    /// subject shares no byte values with the LTC subject, so no substring
    /// of the canonical identifier can appear in it.
    pub fn authorize(
        &mut self,
        ltca: &Ltca,
        root: &Certificate,
        ltc: &Certificate,
        vehicle_pk: &PublicKey,
        now_s: u64,
    ) -> Result<Certificate, AuthorizeError> {
        if !ltc.is_valid_at(now_s) {
            return Err(AuthorizeError::ExpiredLtc);
        }
        if ltc.kind != CertificateKind::Ltc
            || verify_chain(ltc, std::slice::from_ref(ltca.certificate()), root, now_s).is_err()
        {
            return Err(AuthorizeError::BadChain);
        }
        let ltc_hash = ltc.hashed_id(self.hash_len);
        if ltca.validate_for_authorization(&ltc_hash).is_err() {
            return Err(AuthorizeError::LtcaRejected);
        }

        let pseudonym = self.fresh_pseudonym(&ltc.subject_id);
        let stc = issue_certificate(
            CertificateKind::Stc,
            pseudonym,
            *vehicle_pk,
            now_s,
            now_s + self.stc_validity_s,
            Default::default(),
            self.cert.hashed_id(HashedIdLength::Id8),
            self.keypair.private(),
        );
        let stc_hash = stc.hashed_id(self.hash_len);
        self.insert_record(IssuanceRecord {
            issued_cert_hash: stc_hash,
            parent_ref: ltc_hash,
            subject: None,
            issue_time: now_s,
        });
        Ok(stc)
    }

    /// Resolution-side lookup from an STC hash to the backing LTC hash.
    pub fn lookup_parent(&self, stc_hash: &HashedId) -> Option<&HashedId> {
        self.records.get(stc_hash).map(|r| &r.parent_ref)
    }

    pub fn records(&self) -> impl Iterator<Item = &IssuanceRecord> {
        self.record_order.iter().map(|h| &self.records[h])
    }

    pub fn record_count(&self) -> usize {
        self.records.len()
    }

    fn insert_record(&mut self, record: IssuanceRecord) {
        debug_assert!(
            record.subject.is_none(),
            "STCA records never carry canonical identities"
        );
        let hash = record.issued_cert_hash;
        if self.records.insert(hash, record).is_none() {
            self.record_order.push(hash);
        }
    }

    /// Journal-replay entry point: re-inserts a previously issued record.
    pub fn restore_record(&mut self, record: IssuanceRecord) {
        self.insert_record(record);
    }

    pub(super) fn reseed_rng(&mut self, rng: ChaCha20Rng) {
        self.rng = rng;
    }

    /// Draws pseudonym bytes from the byte alphabet disjoint from the
    /// canonical subject bytes.
    fn fresh_pseudonym(&mut self, canonical_bytes: &[u8]) -> Vec<u8> {
        let allowed: Vec<u8> = (0u8..=255)
            .filter(|b| !canonical_bytes.contains(b))
            .collect();
        assert!(
            !allowed.is_empty(),
            "canonical identifier uses every byte value; cannot build a disjoint pseudonym"
        );
        (0..PSEUDONYM_LEN)
            .map(|_| allowed[self.rng.random_range(0..allowed.len())])
            .collect()
    }
}
