//! Zero-value transactions and the signed revocation payload they carry.

use thiserror::Error;

use crate::certkit::{hashed_id_of, sign, verify, HashedId, HashedIdLength, PrivateKey, PublicKey};

use super::trytes::TryteAddress;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PayloadError {
    #[error("payload truncated while reading `{0}`")]
    Truncated(&'static str),
    #[error("invalid hash length byte {0}")]
    BadHashLength(u8),
    #[error("{0} trailing bytes after payload")]
    TrailingBytes(usize),
}

/// Revocation statement signed by the resolution authority.
///
/// The signature covers `revoked_hash || revocation_time || ra_cert_hash`,
/// so a transaction at the right address but without a valid authority
/// signature carries no weight with checkers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RevocationPayload {
    pub revoked_hash: HashedId,
    /// Unix seconds.
    pub revocation_time: u64,
    pub ra_cert_hash: HashedId,
    pub signature: Vec<u8>,
}

impl RevocationPayload {
    fn signed_bytes(revoked_hash: &HashedId, revocation_time: u64, ra_cert_hash: &HashedId) -> Vec<u8> {
        let mut bytes = Vec::with_capacity(32);
        bytes.extend_from_slice(revoked_hash.as_bytes());
        bytes.extend_from_slice(&revocation_time.to_be_bytes());
        bytes.extend_from_slice(ra_cert_hash.as_bytes());
        bytes
    }

    /// Builds and signs a payload with the authority's private key.
    pub fn build(
        revoked_hash: HashedId,
        revocation_time: u64,
        ra_cert_hash: HashedId,
        ra_private: &PrivateKey,
    ) -> Self {
        let signature = sign(
            ra_private,
            &Self::signed_bytes(&revoked_hash, revocation_time, &ra_cert_hash),
        );
        Self {
            revoked_hash,
            revocation_time,
            ra_cert_hash,
            signature,
        }
    }

    /// Verifies the payload signature under a candidate authority key.
    pub fn verify(&self, ra_public: &PublicKey) -> bool {
        verify(
            ra_public,
            &Self::signed_bytes(&self.revoked_hash, self.revocation_time, &self.ra_cert_hash),
            &self.signature,
        )
    }

    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(40 + self.signature.len());
        out.push(self.revoked_hash.length().len() as u8);
        out.extend_from_slice(self.revoked_hash.as_bytes());
        out.extend_from_slice(&self.revocation_time.to_be_bytes());
        out.push(self.ra_cert_hash.length().len() as u8);
        out.extend_from_slice(self.ra_cert_hash.as_bytes());
        out.extend_from_slice(&(self.signature.len() as u16).to_be_bytes());
        out.extend_from_slice(&self.signature);
        out
    }

    pub fn decode(bytes: &[u8]) -> Result<Self, PayloadError> {
        let mut cursor = Cursor { bytes, pos: 0 };
        let revoked_hash = cursor.hash("revoked_hash")?;
        let revocation_time =
            u64::from_be_bytes(cursor.take(8, "revocation_time")?.try_into().unwrap());
        let ra_cert_hash = cursor.hash("ra_cert_hash")?;
        let sig_len =
            u16::from_be_bytes(cursor.take(2, "signature length")?.try_into().unwrap()) as usize;
        let signature = cursor.take(sig_len, "signature")?.to_vec();
        if cursor.pos != bytes.len() {
            return Err(PayloadError::TrailingBytes(bytes.len() - cursor.pos));
        }
        Ok(Self {
            revoked_hash,
            revocation_time,
            ra_cert_hash,
            signature,
        })
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize, field: &'static str) -> Result<&'a [u8], PayloadError> {
        if self.pos + n > self.bytes.len() {
            return Err(PayloadError::Truncated(field));
        }
        let slice = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(slice)
    }

    fn hash(&mut self, field: &'static str) -> Result<HashedId, PayloadError> {
        let len_byte = self.take(1, field)?[0];
        let length = HashedIdLength::from_len(len_byte as usize)
            .ok_or(PayloadError::BadHashLength(len_byte))?;
        Ok(HashedId::new(length, self.take(length.len(), field)?).unwrap())
    }
}

/// A data-only ledger entry: no value field exists, so the transferred
/// amount is zero by construction. `tx_id` is the 8-byte whole-payload
/// hash.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroValueTransaction {
    pub address: TryteAddress,
    pub payload: Vec<u8>,
    /// Unix milliseconds.
    pub attach_time_ms: u64,
    pub tx_id: HashedId,
}

impl ZeroValueTransaction {
    pub fn new(address: TryteAddress, payload: Vec<u8>, attach_time_ms: u64) -> Self {
        let tx_id = hashed_id_of(&payload, HashedIdLength::Id8);
        Self {
            address,
            payload,
            attach_time_ms,
            tx_id,
        }
    }

    /// Re-checks the `tx_id == payload-hash` invariant (used when loading
    /// transactions from external dumps).
    pub fn id_is_consistent(&self) -> bool {
        self.tx_id == hashed_id_of(&self.payload, HashedIdLength::Id8)
    }
}
