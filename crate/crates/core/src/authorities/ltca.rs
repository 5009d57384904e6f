//! Long-term certification authority: enrolment and the ban list.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use crate::certkit::{
    issue_certificate, CanonicalId, Certificate, CertificateKind, HashedId, HashedIdLength,
    KeyPair, PublicKey,
};

use super::{EnrollError, IssuanceRecord};

/// Banned canonical identities with their ban times. Membership is
/// permanent: there is no unban operation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BanList {
    banned: BTreeMap<CanonicalId, u64>,
}

impl BanList {
    pub fn contains(&self, id: &CanonicalId) -> bool {
        self.banned.contains_key(id)
    }

    /// Adds an entry; returns `true` if the identity was newly banned.
    pub fn insert(&mut self, id: CanonicalId, ban_time: u64) -> bool {
        if self.banned.contains_key(&id) {
            return false;
        }
        self.banned.insert(id, ban_time);
        true
    }

    pub fn len(&self) -> usize {
        self.banned.len()
    }

    pub fn is_empty(&self) -> bool {
        self.banned.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CanonicalId, u64)> {
        self.banned.iter().map(|(id, &t)| (id, t))
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LtcaValidationError {
    #[error("no issuance record for the presented LTC")]
    UnknownLtc,
    #[error("subject behind the LTC is banned")]
    BannedSubject,
}

/// Enrolment authority. Owns pre-registrations, LTC issuance records, and
/// the ban list.
pub struct Ltca {
    cert: Certificate,
    keypair: KeyPair,
    hash_len: HashedIdLength,
    ltc_validity_s: u64,
    preregistered: BTreeSet<CanonicalId>,
    records: HashMap<HashedId, IssuanceRecord>,
    record_order: Vec<HashedId>,
    ban_list: BanList,
}

impl Ltca {
    pub(super) fn new(
        cert: Certificate,
        keypair: KeyPair,
        hash_len: HashedIdLength,
        ltc_validity_s: u64,
    ) -> Self {
        Self {
            cert,
            keypair,
            hash_len,
            ltc_validity_s,
            preregistered: BTreeSet::new(),
            records: HashMap::new(),
            record_order: Vec::new(),
            ban_list: BanList::default(),
        }
    }

    pub fn certificate(&self) -> &Certificate {
        &self.cert
    }

    /// Registers a canonical identity as known to the system. Idempotent;
    /// returns `true` if the identity was new.
    pub fn preregister(&mut self, id: CanonicalId) -> bool {
        self.preregistered.insert(id)
    }

    pub fn is_preregistered(&self, id: &CanonicalId) -> bool {
        self.preregistered.contains(id)
    }

    /// Issues a long-term certificate for a pre-registered, unbanned
    /// identity and stores the issuance record. Re-enrolment of the same
    /// identity yields a fresh certificate and a fresh record.
    pub fn enroll(
        &mut self,
        id: &CanonicalId,
        vehicle_pk: &PublicKey,
        now_s: u64,
    ) -> Result<Certificate, EnrollError> {
        if self.ban_list.contains(id) {
            return Err(EnrollError::BannedSubject);
        }
        if !self.preregistered.contains(id) {
            return Err(EnrollError::NotPreRegistered);
        }
        let ltc = issue_certificate(
            CertificateKind::Ltc,
            id.as_bytes().to_vec(),
            *vehicle_pk,
            now_s,
            now_s + self.ltc_validity_s,
            Default::default(),
            self.cert.hashed_id(HashedIdLength::Id8),
            self.keypair.private(),
        );
        let hash = ltc.hashed_id(self.hash_len);
        self.insert_record(IssuanceRecord {
            issued_cert_hash: hash,
            parent_ref: HashedId::zero(self.hash_len),
            subject: Some(id.clone()),
            issue_time: now_s,
        });
        Ok(ltc)
    }

    /// The validation the STCA requests before issuing a pseudonym: the LTC
    /// must have been issued here and its subject must not be banned.
    pub fn validate_for_authorization(&self, ltc_hash: &HashedId) -> Result<(), LtcaValidationError> {
        let record = self
            .records
            .get(ltc_hash)
            .ok_or(LtcaValidationError::UnknownLtc)?;
        let subject = record
            .subject
            .as_ref()
            .expect("LTCA records always carry a subject");
        if self.ban_list.contains(subject) {
            return Err(LtcaValidationError::BannedSubject);
        }
        Ok(())
    }

    /// Resolution-side lookup from an LTC hash to the canonical identity.
    pub fn lookup_subject(&self, ltc_hash: &HashedId) -> Option<&CanonicalId> {
        self.records.get(ltc_hash)?.subject.as_ref()
    }

    /// Bans an identity; returns `true` if it was newly banned.
    pub fn ban(&mut self, id: CanonicalId, ban_time: u64) -> bool {
        self.ban_list.insert(id, ban_time)
    }

    pub fn ban_list(&self) -> &BanList {
        &self.ban_list
    }

    pub fn records(&self) -> impl Iterator<Item = &IssuanceRecord> {
        self.record_order.iter().map(|h| &self.records[h])
    }

    pub fn record_count(&self) -> usize {
        self.records.len()
    }

    fn insert_record(&mut self, record: IssuanceRecord) {
        debug_assert!(
            record.subject.is_some(),
            "LTCA records must carry the canonical identity"
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
}
