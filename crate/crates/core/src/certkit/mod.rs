//! Certificate data model, canonical encoding, signatures, and hashing.
//!
//! Credentials come in four kinds: the self-signed root, authority
//! certificates issued under it, long-term certificates (LTC) binding a
//! vehicle's canonical identity, and short-term certificates (STC)
//! carrying a pseudonym for anonymous message signing.

mod chain;
pub mod encoding;
mod hash;
mod keys;

pub use chain::{verify_certificate_signature, verify_chain, ChainError};
pub use encoding::{canonical_decode, canonical_encode, DecodeError, EncodingError};
pub use hash::{hashed_id_of, whole_certificate_hash, HashedId, HashedIdLength};
pub use keys::{
    generate_keypair, sign, verify, KeyPair, PrivateKey, PublicKey, PUBLIC_KEY_LEN, SIGNATURE_LEN,
};

use std::collections::BTreeSet;
use std::fmt;

/// Certificate kind tag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CertificateKind {
    Root,
    Authority,
    Ltc,
    Stc,
}

impl CertificateKind {
    pub fn tag(self) -> u8 {
        match self {
            Self::Root => 0,
            Self::Authority => 1,
            Self::Ltc => 2,
            Self::Stc => 3,
        }
    }

    pub fn from_tag(tag: u8) -> Option<Self> {
        match tag {
            0 => Some(Self::Root),
            1 => Some(Self::Authority),
            2 => Some(Self::Ltc),
            3 => Some(Self::Stc),
            _ => None,
        }
    }
}

/// Permanent per-vehicle identifier assigned at pre-registration. Known to
/// the enrolment authority only; never embedded in pseudonym certificates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalId(Vec<u8>);

impl CanonicalId {
    /// Creates an identifier; rejects the empty byte string.
    pub fn new(bytes: impl Into<Vec<u8>>) -> Option<Self> {
        let bytes = bytes.into();
        if bytes.is_empty() {
            None
        } else {
            Some(Self(bytes))
        }
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        hex::encode(&self.0)
    }

    pub fn from_hex(s: &str) -> Option<Self> {
        Self::new(hex::decode(s).ok()?)
    }
}

impl fmt::Debug for CanonicalId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalId({})", self.to_hex())
    }
}

/// A credential binding a public key to a subject under an issuer signature.
///
/// `not_before`/`not_after` bound a half-open validity interval
/// `[not_before, not_after)` in Unix seconds. `issuer_hash` is the 8-byte
/// whole-certificate hash of the issuer (all-zero for the self-signed root).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub subject_id: Vec<u8>,
    pub public_key: PublicKey,
    pub not_before: u64,
    pub not_after: u64,
    pub permissions: BTreeSet<String>,
    pub issuer_hash: HashedId,
    pub signature: Vec<u8>,
}

impl Certificate {
    /// Canonical encoding with the signature field empty: the bytes an
    /// issuer signs.
    pub fn to_be_signed(&self) -> Result<Vec<u8>, EncodingError> {
        let mut unsigned = self.clone();
        unsigned.signature.clear();
        canonical_encode(&unsigned)
    }

    /// Truncated whole-certificate hash.
    pub fn hashed_id(&self, length: HashedIdLength) -> HashedId {
        whole_certificate_hash(self, length)
    }

    /// Whether `at_s` falls inside `[not_before, not_after)`.
    pub fn is_valid_at(&self, at_s: u64) -> bool {
        self.not_before <= at_s && at_s < self.not_after
    }
}

/// Builds and signs a certificate in one step.
pub fn issue_certificate(
    kind: CertificateKind,
    subject_id: Vec<u8>,
    public_key: PublicKey,
    not_before: u64,
    not_after: u64,
    permissions: BTreeSet<String>,
    issuer_hash: HashedId,
    issuer_private: &PrivateKey,
) -> Certificate {
    debug_assert!(not_before < not_after, "validity interval is empty");
    let mut cert = Certificate {
        kind,
        subject_id,
        public_key,
        not_before,
        not_after,
        permissions,
        issuer_hash,
        signature: Vec::new(),
    };
    let tbs = cert
        .to_be_signed()
        .expect("certificate fields exceed encodable size");
    cert.signature = sign(issuer_private, &tbs);
    cert
}

#[cfg(test)]
mod tests {
    use super::*;

    fn self_signed(seed: &[u8]) -> (Certificate, KeyPair) {
        let kp = generate_keypair(Some(seed));
        let cert = issue_certificate(
            CertificateKind::Root,
            b"root".to_vec(),
            *kp.public(),
            0,
            10_000,
            BTreeSet::new(),
            HashedId::zero(HashedIdLength::Id8),
            kp.private(),
        );
        (cert, kp)
    }

    #[test]
    fn issued_certificate_verifies() {
        let (cert, kp) = self_signed(b"root");
        assert!(verify(kp.public(), &cert.to_be_signed().unwrap(), &cert.signature));
    }

    #[test]
    fn equal_certificates_share_a_hash() {
        let (a, _) = self_signed(b"h");
        let b = a.clone();
        assert_eq!(
            a.hashed_id(HashedIdLength::Id8),
            b.hashed_id(HashedIdLength::Id8)
        );
    }

    #[test]
    fn truncation_consistency_over_certificates() {
        for seed in [&b"a"[..], b"b", b"c"] {
            let (cert, _) = self_signed(seed);
            let id10 = cert.hashed_id(HashedIdLength::Id10);
            let id8 = cert.hashed_id(HashedIdLength::Id8);
            let id3 = cert.hashed_id(HashedIdLength::Id3);
            assert_eq!(id8.as_bytes(), &id10.as_bytes()[2..]);
            assert_eq!(id3.as_bytes(), &id10.as_bytes()[7..]);
        }
    }

    #[test]
    fn validity_interval_is_half_open() {
        let (mut cert, _) = self_signed(b"v");
        cert.not_before = 100;
        assert!(!cert.is_valid_at(99));
        assert!(cert.is_valid_at(100));
        assert!(cert.is_valid_at(cert.not_after - 1));
        assert!(!cert.is_valid_at(cert.not_after));
    }

    #[test]
    fn encoding_never_contains_private_key_material() {
        // Byte-scan check: no 16-byte window of the private key shows up in
        // the canonical encoding.
        let (cert, kp) = self_signed(b"scan");
        let encoded = canonical_encode(&cert).unwrap();
        let sk = kp.private().as_bytes();
        for window in sk.windows(16) {
            assert!(
                !encoded.windows(16).any(|w| w == window),
                "private key bytes leaked into encoding"
            );
        }
    }

    #[test]
    fn canonical_id_rejects_empty() {
        assert!(CanonicalId::new(Vec::new()).is_none());
        assert!(CanonicalId::new(b"V-1".to_vec()).is_some());
    }

    #[test]
    fn canonical_id_hex_round_trip() {
        let id = CanonicalId::new(b"V-0001".to_vec()).unwrap();
        assert_eq!(CanonicalId::from_hex(&id.to_hex()), Some(id));
    }
}
