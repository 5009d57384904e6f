//! Certificate chain verification up to a trusted root.

use thiserror::Error;

use super::hash::HashedIdLength;
use super::keys::{verify, PublicKey};
use super::Certificate;

/// Maximum chain depth: end entity -> authority -> root.
const MAX_DEPTH: usize = 3;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ChainError {
    #[error("certificate not valid at the evaluation time")]
    Expired,
    #[error("no known certificate matches the issuer reference")]
    UnknownIssuer,
    #[error("issuer signature does not verify")]
    BadSignature,
    #[error("chain exceeds maximum depth {MAX_DEPTH}")]
    TooDeep,
    #[error("root certificate is not a valid self-signed anchor")]
    BadRoot,
}

/// Verifies a certificate's signature against a candidate issuer key.
pub fn verify_certificate_signature(cert: &Certificate, issuer_public: &PublicKey) -> bool {
    match cert.to_be_signed() {
        Ok(tbs) => verify(issuer_public, &tbs, &cert.signature),
        Err(_) => false,
    }
}

/// Walks the issuer chain of `leaf` through `intermediates` up to `root`,
/// verifying each signature and validity window at `at_s`.
///
/// The root must be self-signed (all-zero issuer reference, verifying under
/// its own key). Issuers are located by their 8-byte whole-certificate hash.
pub fn verify_chain(
    leaf: &Certificate,
    intermediates: &[Certificate],
    root: &Certificate,
    at_s: u64,
) -> Result<(), ChainError> {
    if !root.issuer_hash.is_zero() || !verify_certificate_signature(root, &root.public_key) {
        return Err(ChainError::BadRoot);
    }
    if !root.is_valid_at(at_s) {
        return Err(ChainError::Expired);
    }

    let root_hash = root.hashed_id(HashedIdLength::Id8);
    let mut current = leaf;
    for _ in 0..MAX_DEPTH {
        if !current.is_valid_at(at_s) {
            return Err(ChainError::Expired);
        }
        if current.issuer_hash == root_hash {
            return if verify_certificate_signature(current, &root.public_key) {
                Ok(())
            } else {
                Err(ChainError::BadSignature)
            };
        }
        let issuer = intermediates
            .iter()
            .find(|c| c.hashed_id(HashedIdLength::Id8) == current.issuer_hash)
            .ok_or(ChainError::UnknownIssuer)?;
        if !verify_certificate_signature(current, &issuer.public_key) {
            return Err(ChainError::BadSignature);
        }
        current = issuer;
    }
    Err(ChainError::TooDeep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certkit::{
        generate_keypair, issue_certificate, CertificateKind, HashedId, KeyPair,
    };
    use std::collections::BTreeSet;

    struct Pki {
        root: Certificate,
        authority: Certificate,
        authority_kp: KeyPair,
        leaf: Certificate,
    }

    fn build_pki() -> Pki {
        let root_kp = generate_keypair(Some(b"chain-root"));
        let root = issue_certificate(
            CertificateKind::Root,
            b"root".to_vec(),
            *root_kp.public(),
            0,
            1_000_000,
            BTreeSet::new(),
            HashedId::zero(HashedIdLength::Id8),
            root_kp.private(),
        );
        let authority_kp = generate_keypair(Some(b"chain-authority"));
        let authority = issue_certificate(
            CertificateKind::Authority,
            b"stca".to_vec(),
            *authority_kp.public(),
            0,
            1_000_000,
            BTreeSet::new(),
            root.hashed_id(HashedIdLength::Id8),
            root_kp.private(),
        );
        let leaf_kp = generate_keypair(Some(b"chain-leaf"));
        let leaf = issue_certificate(
            CertificateKind::Stc,
            vec![0xEE; 16],
            *leaf_kp.public(),
            100,
            2_000,
            BTreeSet::new(),
            authority.hashed_id(HashedIdLength::Id8),
            authority_kp.private(),
        );
        Pki {
            root,
            authority,
            authority_kp,
            leaf,
        }
    }

    #[test]
    fn valid_chain_verifies() {
        let pki = build_pki();
        assert_eq!(
            verify_chain(&pki.leaf, &[pki.authority.clone()], &pki.root, 500),
            Ok(())
        );
    }

    #[test]
    fn expired_leaf_is_rejected() {
        let pki = build_pki();
        assert_eq!(
            verify_chain(&pki.leaf, &[pki.authority.clone()], &pki.root, 2_000),
            Err(ChainError::Expired)
        );
    }

    #[test]
    fn missing_intermediate_is_rejected() {
        let pki = build_pki();
        assert_eq!(
            verify_chain(&pki.leaf, &[], &pki.root, 500),
            Err(ChainError::UnknownIssuer)
        );
    }

    #[test]
    fn tampered_leaf_is_rejected() {
        let pki = build_pki();
        let mut forged = pki.leaf.clone();
        forged.not_after += 1;
        assert_eq!(
            verify_chain(&forged, &[pki.authority.clone()], &pki.root, 500),
            Err(ChainError::BadSignature)
        );
    }

    #[test]
    fn leaf_signed_by_wrong_key_is_rejected() {
        let pki = build_pki();
        let rogue_kp = generate_keypair(Some(b"rogue"));
        let mut rogue = pki.leaf.clone();
        let tbs = rogue.to_be_signed().unwrap();
        rogue.signature = crate::certkit::sign(rogue_kp.private(), &tbs);
        assert_eq!(
            verify_chain(&rogue, &[pki.authority.clone()], &pki.root, 500),
            Err(ChainError::BadSignature)
        );
    }

    #[test]
    fn non_self_signed_root_is_rejected() {
        let pki = build_pki();
        assert_eq!(
            verify_chain(&pki.leaf, &[], &pki.authority, 500),
            Err(ChainError::BadRoot)
        );
        let _ = pki.authority_kp;
    }
}
