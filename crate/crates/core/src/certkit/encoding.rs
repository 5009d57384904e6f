//! Canonical certificate byte encoding.
//!
//! The encoding is a deterministic, injective stand-in for a full
//! standards-grade certificate encoding: a 1-byte kind tag, 2-byte
//! big-endian length prefixes on every variable-length field, 8-byte
//! big-endian timestamps, and permission tags in strictly ascending
//! order. `decode` accepts exactly the bytes `encode` produces, so
//! `decode(encode(c)) == c` and distinct certificates never share an
//! encoding.

use thiserror::Error;

use super::hash::{HashedId, HashedIdLength};
use super::keys::PublicKey;
use super::{Certificate, CertificateKind};

const MAX_FIELD_LEN: usize = u16::MAX as usize;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EncodingError {
    #[error("field `{field}` is {len} bytes, exceeding the {MAX_FIELD_LEN}-byte limit")]
    Overflow { field: &'static str, len: usize },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecodeError {
    #[error("input truncated while reading `{0}`")]
    Truncated(&'static str),
    #[error("unknown certificate kind tag {0:#04x}")]
    UnknownKind(u8),
    #[error("public key has invalid length {0}")]
    BadPublicKey(usize),
    #[error("permission tag is not valid UTF-8")]
    BadPermissionUtf8,
    #[error("permission tags are not strictly ascending")]
    NonCanonicalPermissions,
    #[error("{0} trailing bytes after certificate")]
    TrailingBytes(usize),
}

fn put_var(out: &mut Vec<u8>, field: &'static str, bytes: &[u8]) -> Result<(), EncodingError> {
    if bytes.len() > MAX_FIELD_LEN {
        return Err(EncodingError::Overflow {
            field,
            len: bytes.len(),
        });
    }
    out.extend_from_slice(&(bytes.len() as u16).to_be_bytes());
    out.extend_from_slice(bytes);
    Ok(())
}

/// Encodes a certificate to its canonical byte form. The signature field may
/// be empty, which yields the to-be-signed form.
pub fn canonical_encode(cert: &Certificate) -> Result<Vec<u8>, EncodingError> {
    let mut out = Vec::with_capacity(128 + cert.subject_id.len() + cert.signature.len());
    out.push(cert.kind.tag());
    put_var(&mut out, "subject_id", &cert.subject_id)?;
    put_var(&mut out, "public_key", cert.public_key.as_bytes())?;
    out.extend_from_slice(&cert.not_before.to_be_bytes());
    out.extend_from_slice(&cert.not_after.to_be_bytes());
    if cert.permissions.len() > MAX_FIELD_LEN {
        return Err(EncodingError::Overflow {
            field: "permissions",
            len: cert.permissions.len(),
        });
    }
    out.extend_from_slice(&(cert.permissions.len() as u16).to_be_bytes());
    for tag in &cert.permissions {
        put_var(&mut out, "permission", tag.as_bytes())?;
    }
    // Issuer reference is always the 8-byte form, written raw.
    out.extend_from_slice(cert.issuer_hash.as_bytes());
    put_var(&mut out, "signature", &cert.signature)?;
    Ok(out)
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize, field: &'static str) -> Result<&'a [u8], DecodeError> {
        if self.pos + n > self.bytes.len() {
            return Err(DecodeError::Truncated(field));
        }
        let slice = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(slice)
    }

    fn u8(&mut self, field: &'static str) -> Result<u8, DecodeError> {
        Ok(self.take(1, field)?[0])
    }

    fn u16(&mut self, field: &'static str) -> Result<u16, DecodeError> {
        Ok(u16::from_be_bytes(self.take(2, field)?.try_into().unwrap()))
    }

    fn u64(&mut self, field: &'static str) -> Result<u64, DecodeError> {
        Ok(u64::from_be_bytes(self.take(8, field)?.try_into().unwrap()))
    }

    fn var(&mut self, field: &'static str) -> Result<&'a [u8], DecodeError> {
        let len = self.u16(field)? as usize;
        self.take(len, field)
    }
}

/// Decodes canonical certificate bytes, rejecting any non-canonical form.
pub fn canonical_decode(bytes: &[u8]) -> Result<Certificate, DecodeError> {
    let mut r = Reader { bytes, pos: 0 };
    let tag = r.u8("kind")?;
    let kind = CertificateKind::from_tag(tag).ok_or(DecodeError::UnknownKind(tag))?;
    let subject_id = r.var("subject_id")?.to_vec();
    let pk_bytes = r.var("public_key")?;
    let public_key =
        PublicKey::try_from_slice(pk_bytes).ok_or(DecodeError::BadPublicKey(pk_bytes.len()))?;
    let not_before = r.u64("not_before")?;
    let not_after = r.u64("not_after")?;

    let perm_count = r.u16("permission count")? as usize;
    let mut permissions = std::collections::BTreeSet::new();
    let mut previous: Option<String> = None;
    for _ in 0..perm_count {
        let tag = String::from_utf8(r.var("permission")?.to_vec())
            .map_err(|_| DecodeError::BadPermissionUtf8)?;
        if previous.as_deref().is_some_and(|prev| prev >= tag.as_str()) {
            return Err(DecodeError::NonCanonicalPermissions);
        }
        previous = Some(tag.clone());
        permissions.insert(tag);
    }

    let issuer_bytes = r.take(HashedIdLength::Id8.len(), "issuer_hash")?;
    let issuer_hash = HashedId::new(HashedIdLength::Id8, issuer_bytes).unwrap();
    let signature = r.var("signature")?.to_vec();

    if r.pos != bytes.len() {
        return Err(DecodeError::TrailingBytes(bytes.len() - r.pos));
    }

    Ok(Certificate {
        kind,
        subject_id,
        public_key,
        not_before,
        not_after,
        permissions,
        issuer_hash,
        signature,
    })
}
