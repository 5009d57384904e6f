//! Whole-certificate hashing and truncated identifiers.
//!
//! A certificate's identifier is the SHA-256 digest of its canonical
//! encoding, truncated to the lowest-order (rightmost) 3, 8, or 10 bytes.

use sha2::{Digest, Sha256};
use std::fmt;

use super::encoding::canonical_encode;
use super::Certificate;

const MAX_HASHED_ID_LEN: usize = 10;

/// The three supported truncation lengths.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HashedIdLength {
    Id3,
    Id8,
    Id10,
}

impl HashedIdLength {
    pub const ALL: [HashedIdLength; 3] = [Self::Id3, Self::Id8, Self::Id10];

    pub fn len(self) -> usize {
        match self {
            Self::Id3 => 3,
            Self::Id8 => 8,
            Self::Id10 => 10,
        }
    }

    pub fn from_len(len: usize) -> Option<Self> {
        match len {
            3 => Some(Self::Id3),
            8 => Some(Self::Id8),
            10 => Some(Self::Id10),
            _ => None,
        }
    }
}

/// A truncated certificate hash: the rightmost `length` bytes of a SHA-256
/// digest. Equality is byte-wise over the valid prefix.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HashedId {
    length: HashedIdLength,
    // First `length.len()` bytes are valid; the tail is always zero so the
    // derived Eq/Hash/Ord stay byte-wise correct.
    bytes: [u8; MAX_HASHED_ID_LEN],
}

impl HashedId {
    /// Builds a `HashedId` from exactly `length.len()` bytes.
    pub fn new(length: HashedIdLength, bytes: &[u8]) -> Option<Self> {
        if bytes.len() != length.len() {
            return None;
        }
        let mut buf = [0u8; MAX_HASHED_ID_LEN];
        buf[..bytes.len()].copy_from_slice(bytes);
        Some(Self { length, bytes: buf })
    }

    /// Convenience constructor for the 8-byte form used by the protocol
    /// defaults.
    pub fn id8(bytes: [u8; 8]) -> Self {
        Self::new(HashedIdLength::Id8, &bytes).unwrap()
    }

    /// All-zero identifier of the given length (self-signed issuer marker).
    pub fn zero(length: HashedIdLength) -> Self {
        Self {
            length,
            bytes: [0u8; MAX_HASHED_ID_LEN],
        }
    }

    pub fn length(&self) -> HashedIdLength {
        self.length
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes[..self.length.len()]
    }

    pub fn is_zero(&self) -> bool {
        self.as_bytes().iter().all(|&b| b == 0)
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.as_bytes())
    }

    /// Parses a lowercase-hex identifier whose length determines the form.
    pub fn from_hex(s: &str) -> Option<Self> {
        let bytes = hex::decode(s).ok()?;
        let length = HashedIdLength::from_len(bytes.len())?;
        Self::new(length, &bytes)
    }
}

impl fmt::Debug for HashedId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HashedId{}({})", self.length.len(), self.to_hex())
    }
}

impl fmt::Display for HashedId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

/// SHA-256 of `data`, truncated to the rightmost `length` bytes.
pub fn hashed_id_of(data: &[u8], length: HashedIdLength) -> HashedId {
    let digest: [u8; 32] = Sha256::digest(data).into();
    HashedId::new(length, &digest[32 - length.len()..]).unwrap()
}

/// Whole-certificate hash: SHA-256 over the canonical encoding of the fully
/// populated certificate (signature included), truncated to `length`.
pub fn whole_certificate_hash(cert: &Certificate, length: HashedIdLength) -> HashedId {
    let encoded = canonical_encode(cert).expect("certificate fields exceed encodable size");
    hashed_id_of(&encoded, length)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_input_known_answer() {
        // Independent oracle: SHA-256("") is the well-known constant below.
        let full = "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855";
        let digest: [u8; 32] = Sha256::digest(b"").into();
        assert_eq!(hex::encode(digest), full);

        assert_eq!(
            hashed_id_of(b"", HashedIdLength::Id8).to_hex(),
            "a495991b7852b855"
        );
        assert_eq!(hashed_id_of(b"", HashedIdLength::Id3).to_hex(), "52b855");
        assert_eq!(
            hashed_id_of(b"", HashedIdLength::Id10).to_hex(),
            "934ca495991b7852b855"
        );
    }

    #[test]
    fn truncations_are_suffixes_of_each_other() {
        for input in [&b""[..], b"a", b"certificate bytes", &[0u8; 100]] {
            let id10 = hashed_id_of(input, HashedIdLength::Id10);
            let id8 = hashed_id_of(input, HashedIdLength::Id8);
            let id3 = hashed_id_of(input, HashedIdLength::Id3);
            assert_eq!(id8.as_bytes(), &id10.as_bytes()[2..]);
            assert_eq!(id3.as_bytes(), &id10.as_bytes()[7..]);
        }
    }

    #[test]
    fn hex_round_trip() {
        let id = hashed_id_of(b"x", HashedIdLength::Id8);
        assert_eq!(HashedId::from_hex(&id.to_hex()), Some(id));
        assert_eq!(HashedId::from_hex("ff"), None);
        assert_eq!(HashedId::from_hex("zz"), None);
    }

    #[test]
    fn zero_id_is_zero() {
        assert!(HashedId::zero(HashedIdLength::Id8).is_zero());
        assert!(!hashed_id_of(b"", HashedIdLength::Id8).is_zero());
    }
}
