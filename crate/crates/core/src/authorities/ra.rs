//! Resolution authority: revocation publication and identity resolution.

use crate::certkit::{CanonicalId, Certificate, HashedId, HashedIdLength, KeyPair};
use crate::tangle::{derive_address, AttachReceipt, Ledger, RevocationPayload, ZeroValueTransaction};

use super::ltca::Ltca;
use super::stca::Stca;
use super::ResolveError;

/// Holds the only key allowed to sign revocation payloads. Checkers ignore
/// any transaction not signed under this certificate.
pub struct Ra {
    cert: Certificate,
    keypair: KeyPair,
    hash_len: HashedIdLength,
}

impl Ra {
    pub(super) fn new(cert: Certificate, keypair: KeyPair, hash_len: HashedIdLength) -> Self {
        Self {
            cert,
            keypair,
            hash_len,
        }
    }

    pub fn certificate(&self) -> &Certificate {
        &self.cert
    }

    /// Signs a revocation payload for `cert_hash` and attaches it at the
    /// address derived from that hash.
    pub fn publish_revocation(
        &self,
        ledger: &Ledger,
        cert_hash: &HashedId,
        now_ms: u64,
    ) -> (ZeroValueTransaction, AttachReceipt) {
        let payload = RevocationPayload::build(
            *cert_hash,
            now_ms / 1000,
            self.cert.hashed_id(self.hash_len),
            self.keypair.private(),
        );
        let tx = ZeroValueTransaction::new(derive_address(cert_hash), payload.encode(), now_ms);
        let receipt = ledger.attach(tx.clone());
        (tx, receipt)
    }

    /// Two-step join from a pseudonym certificate hash back to the canonical
    /// identity: STCA yields the backing LTC hash, the LTCA yields the
    /// subject behind it. On success the identity is banned at the LTCA.
    pub fn resolve_identity(
        &self,
        stca: &Stca,
        ltca: &mut Ltca,
        stc_hash: &HashedId,
        now_s: u64,
    ) -> Result<CanonicalId, ResolveError> {
        let ltc_hash = stca
            .lookup_parent(stc_hash)
            .ok_or(ResolveError::ResolutionFailed)?;
        let canonical = ltca
            .lookup_subject(ltc_hash)
            .ok_or(ResolveError::ResolutionFailed)?
            .clone();
        ltca.ban(canonical.clone(), now_s);
        Ok(canonical)
    }
}
