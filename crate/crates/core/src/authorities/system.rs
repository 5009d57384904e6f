//! Trust bootstrap and the assembled authority domain.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use tracing::warn;

use crate::certkit::{
    generate_keypair, issue_certificate, CanonicalId, Certificate, CertificateKind, HashedId,
    HashedIdLength, KeyPair, PublicKey,
};
use crate::tangle::{AttachReceipt, LatencyModel, Ledger, ZeroValueTransaction};

use super::ltca::Ltca;
use super::ra::Ra;
use super::stca::Stca;
use super::{AuthorizeError, EnrollError, IssuanceRecord, MisbehaviorReport, ResolveError};

/// Everything needed to rebuild an identical trust domain: seed-derived
/// keys plus fixed certificate parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BootstrapConfig {
    pub seed: u64,
    /// Authority certificate validity, Unix seconds.
    pub not_before: u64,
    pub not_after: u64,
    pub hash_len: HashedIdLength,
    pub ltc_validity_s: u64,
    pub stc_validity_s: u64,
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            not_before: 0,
            // 2100-01-01, comfortably beyond any simulated horizon.
            not_after: 4_102_444_800,
            hash_len: HashedIdLength::Id8,
            ltc_validity_s: 10 * 365 * 86_400,
            stc_validity_s: 7 * 86_400,
        }
    }
}

/// The five public authority certificates.
#[derive(Clone, Debug)]
pub struct AuthorityCerts {
    pub root: Certificate,
    pub ltca: Certificate,
    pub stca: Certificate,
    pub ra: Certificate,
    pub ma: Certificate,
}

/// Result of processing a fresh misbehavior report: the published
/// transaction, its attach receipt, and the (possibly failed) resolution.
#[derive(Debug)]
pub struct RevocationOutcome {
    pub tx: ZeroValueTransaction,
    pub receipt: AttachReceipt,
    pub resolution: Result<CanonicalId, ResolveError>,
}

/// Misbehavior authority: deduplicates reports. Detection itself is out of
/// scope; reports are injected from outside.
struct Ma {
    #[allow(dead_code)]
    cert: Certificate,
    processed: BTreeSet<HashedId>,
}

/// One home domain: all five authorities plus the shared ledger.
pub struct VpkiSystem {
    config: BootstrapConfig,
    root_cert: Certificate,
    #[allow(dead_code)]
    root_keypair: KeyPair,
    ltca: Ltca,
    stca: Stca,
    ra: Ra,
    ma: Ma,
    ma_cert: Certificate,
    ledger: Arc<Ledger>,
}

fn role_keypair(seed: u64, role: &str) -> KeyPair {
    let mut material = seed.to_be_bytes().to_vec();
    material.extend_from_slice(b"/");
    material.extend_from_slice(role.as_bytes());
    generate_keypair(Some(&material))
}

impl VpkiSystem {
    /// Builds the trust anchor and every authority certificate under it.
    /// Fully deterministic in `config.seed`.
    pub fn bootstrap(config: BootstrapConfig, ledger_latency: LatencyModel) -> Self {
        let ledger = Arc::new(Ledger::new(ledger_latency, config.seed));
        Self::bootstrap_with_ledger(config, ledger)
    }

    /// Bootstrap against an externally constructed ledger (restores, shared
    /// ledgers in simulations).
    pub fn bootstrap_with_ledger(config: BootstrapConfig, ledger: Arc<Ledger>) -> Self {
        let root_keypair = role_keypair(config.seed, "root");
        let root_cert = issue_certificate(
            CertificateKind::Root,
            b"root".to_vec(),
            *root_keypair.public(),
            config.not_before,
            config.not_after,
            BTreeSet::new(),
            HashedId::zero(HashedIdLength::Id8),
            root_keypair.private(),
        );
        let root_hash = root_cert.hashed_id(HashedIdLength::Id8);

        let authority_cert = |role: &str| -> (Certificate, KeyPair) {
            let kp = role_keypair(config.seed, role);
            let cert = issue_certificate(
                CertificateKind::Authority,
                role.as_bytes().to_vec(),
                *kp.public(),
                config.not_before,
                config.not_after,
                BTreeSet::new(),
                root_hash,
                root_keypair.private(),
            );
            (cert, kp)
        };

        let (ltca_cert, ltca_kp) = authority_cert("ltca");
        let (stca_cert, stca_kp) = authority_cert("stca");
        let (ra_cert, ra_kp) = authority_cert("ra");
        let (ma_cert, _ma_kp) = authority_cert("ma");

        let stca_rng = ChaCha20Rng::seed_from_u64(config.seed ^ 0x5354_4341); // "STCA"

        Self {
            config,
            root_cert,
            root_keypair,
            ltca: Ltca::new(ltca_cert, ltca_kp, config.hash_len, config.ltc_validity_s),
            stca: Stca::new(
                stca_cert,
                stca_kp,
                config.hash_len,
                config.stc_validity_s,
                stca_rng,
            ),
            ra: Ra::new(ra_cert, ra_kp, config.hash_len),
            ma: Ma {
                cert: ma_cert.clone(),
                processed: BTreeSet::new(),
            },
            ma_cert,
            ledger,
        }
    }

    pub fn config(&self) -> &BootstrapConfig {
        &self.config
    }

    pub fn hash_len(&self) -> HashedIdLength {
        self.config.hash_len
    }

    pub fn certs(&self) -> AuthorityCerts {
        AuthorityCerts {
            root: self.root_cert.clone(),
            ltca: self.ltca.certificate().clone(),
            stca: self.stca.certificate().clone(),
            ra: self.ra.certificate().clone(),
            ma: self.ma_cert.clone(),
        }
    }

    pub fn ledger(&self) -> &Arc<Ledger> {
        &self.ledger
    }

    pub fn ltca(&self) -> &Ltca {
        &self.ltca
    }

    pub fn stca(&self) -> &Stca {
        &self.stca
    }

    pub fn ra(&self) -> &Ra {
        &self.ra
    }

    pub fn preregister(&mut self, id: CanonicalId) -> bool {
        self.ltca.preregister(id)
    }

    pub fn enroll(
        &mut self,
        id: &CanonicalId,
        vehicle_pk: &PublicKey,
        now_s: u64,
    ) -> Result<Certificate, EnrollError> {
        self.ltca.enroll(id, vehicle_pk, now_s)
    }

    pub fn authorize(
        &mut self,
        ltc: &Certificate,
        vehicle_pk: &PublicKey,
        now_s: u64,
    ) -> Result<Certificate, AuthorizeError> {
        self.stca
            .authorize(&self.ltca, &self.root_cert, ltc, vehicle_pk, now_s)
    }

    /// MA entry point. The first report for a hash triggers publication
    /// (first, to close the vulnerability window) and then identity
    /// resolution; duplicates return `None` and have no effect.
    pub fn report_misbehavior(&mut self, report: MisbehaviorReport) -> Option<RevocationOutcome> {
        if !self.ma.processed.insert(report.reported_stc_hash) {
            return None;
        }
        let now_ms = report.report_time * 1000;
        let (tx, receipt) =
            self.ra
                .publish_revocation(&self.ledger, &report.reported_stc_hash, now_ms);
        let resolution = self.ra.resolve_identity(
            &self.stca,
            &mut self.ltca,
            &report.reported_stc_hash,
            report.report_time,
        );
        if resolution.is_err() {
            warn!(
                hash = %report.reported_stc_hash,
                reporter = %report.reporter,
                "revocation published but identity resolution failed"
            );
        }
        Some(RevocationOutcome {
            tx,
            receipt,
            resolution,
        })
    }

    pub fn publish_revocation(
        &self,
        cert_hash: &HashedId,
        now_ms: u64,
    ) -> (ZeroValueTransaction, AttachReceipt) {
        self.ra.publish_revocation(&self.ledger, cert_hash, now_ms)
    }

    pub fn resolve_identity(
        &mut self,
        stc_hash: &HashedId,
        now_s: u64,
    ) -> Result<CanonicalId, ResolveError> {
        self.ra
            .resolve_identity(&self.stca, &mut self.ltca, stc_hash, now_s)
    }

    // -- journal-replay entry points -------------------------------------

    pub fn restore_prereg(&mut self, id: CanonicalId) {
        self.ltca.preregister(id);
    }

    pub fn restore_ltc_record(&mut self, ltc_hash: HashedId, subject: CanonicalId, issue_time: u64) {
        self.ltca.restore_record(IssuanceRecord {
            issued_cert_hash: ltc_hash,
            parent_ref: HashedId::zero(self.config.hash_len),
            subject: Some(subject),
            issue_time,
        });
    }

    pub fn restore_stc_record(&mut self, stc_hash: HashedId, ltc_hash: HashedId, issue_time: u64) {
        self.stca.restore_record(IssuanceRecord {
            issued_cert_hash: stc_hash,
            parent_ref: ltc_hash,
            subject: None,
            issue_time,
        });
    }

    pub fn restore_ban(&mut self, id: CanonicalId, ban_time: u64) {
        self.ltca.ban(id, ban_time);
    }

    pub fn restore_processed_report(&mut self, stc_hash: HashedId) {
        self.ma.processed.insert(stc_hash);
    }

    /// Re-keys the pseudonym RNG. A restarted process replays issuance
    /// records but not RNG draws, so the service mixes the replayed
    /// issuance count in here to avoid re-walking an already-used
    /// pseudonym stream.
    pub fn reseed_pseudonym_rng(&mut self, nonce: u64) {
        self.stca
            .reseed_rng(ChaCha20Rng::seed_from_u64(self.config.seed ^ 0x5354_4341 ^ nonce));
    }

    /// Count of distinct report hashes the MA has accepted.
    pub fn processed_report_count(&self) -> usize {
        self.ma.processed.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certkit::{verify, verify_chain};
    use std::collections::HashSet;

    fn system_with_seed(seed: u64) -> VpkiSystem {
        VpkiSystem::bootstrap(
            BootstrapConfig {
                seed,
                ..Default::default()
            },
            LatencyModel::Zero,
        )
    }

    #[test]
    fn every_authority_cert_verifies_against_root() {
        let system = system_with_seed(1);
        let certs = system.certs();
        for cert in [&certs.ltca, &certs.stca, &certs.ra, &certs.ma] {
            assert_eq!(verify_chain(cert, &[], &certs.root, 100), Ok(()));
            assert_eq!(cert.issuer_hash, certs.root.hashed_id(HashedIdLength::Id8));
        }
        // Root is self-signed.
        assert!(verify(
            &certs.root.public_key,
            &certs.root.to_be_signed().unwrap(),
            &certs.root.signature
        ));
        assert!(certs.root.issuer_hash.is_zero());
    }

    #[test]
    fn authority_certs_are_mutually_distinct() {
        let certs = system_with_seed(2).certs();
        let hashes: HashSet<_> = [&certs.root, &certs.ltca, &certs.stca, &certs.ra, &certs.ma]
            .iter()
            .map(|c| c.hashed_id(HashedIdLength::Id8))
            .collect();
        assert_eq!(hashes.len(), 5);
    }

    #[test]
    fn distinct_seeds_give_distinct_roots() {
        let roots: HashSet<_> = (0..5u64)
            .map(|seed| {
                system_with_seed(seed)
                    .certs()
                    .root
                    .hashed_id(HashedIdLength::Id8)
            })
            .collect();
        assert_eq!(roots.len(), 5);
    }

    #[test]
    fn bootstrap_is_deterministic_in_the_seed() {
        let a = system_with_seed(77).certs();
        let b = system_with_seed(77).certs();
        assert_eq!(a.root, b.root);
        assert_eq!(a.ra, b.ra);
    }
}
