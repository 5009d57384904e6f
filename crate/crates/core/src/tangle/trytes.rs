//! Tryte encoding and revocation-address derivation.
//!
//! One byte maps to two trytes from the alphabet `9A..Z`: the first tryte
//! is `b mod 27`, the second `b div 27`. A revocation address is the
//! tryte encoding of a truncated certificate hash, right-padded with `9`
//! (the zero tryte) to the 81-character address length.

use std::fmt;
use thiserror::Error;

use crate::certkit::HashedId;

/// The 27-character tryte alphabet; index 0 is `9`.
pub const TRYTE_ALPHABET: &[u8; 27] = b"9ABCDEFGHIJKLMNOPQRSTUVWXYZ";

/// Length of a ledger address in trytes.
pub const ADDRESS_LEN: usize = 81;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AddressError {
    #[error("address is {0} characters, expected {ADDRESS_LEN}")]
    BadLength(usize),
    #[error("address contains byte {0:#04x} outside the tryte alphabet")]
    BadCharacter(u8),
}

/// Encodes one byte as two trytes.
pub fn byte_to_trytes(b: u8) -> [u8; 2] {
    [
        TRYTE_ALPHABET[(b % 27) as usize],
        TRYTE_ALPHABET[(b / 27) as usize],
    ]
}

/// An 81-tryte ledger address.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TryteAddress([u8; ADDRESS_LEN]);

impl TryteAddress {
    /// Validates and wraps an 81-character tryte string.
    pub fn parse(s: &str) -> Result<Self, AddressError> {
        let bytes = s.as_bytes();
        if bytes.len() != ADDRESS_LEN {
            return Err(AddressError::BadLength(bytes.len()));
        }
        let mut buf = [0u8; ADDRESS_LEN];
        for (i, &b) in bytes.iter().enumerate() {
            if !TRYTE_ALPHABET.contains(&b) {
                return Err(AddressError::BadCharacter(b));
            }
            buf[i] = b;
        }
        Ok(Self(buf))
    }

    pub fn as_str(&self) -> &str {
        // Alphabet is ASCII, enforced at construction.
        std::str::from_utf8(&self.0).unwrap()
    }
}

impl fmt::Display for TryteAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Debug for TryteAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TryteAddress({})", self.as_str())
    }
}

/// Derives the ledger address for a truncated certificate hash: per-byte
/// tryte encoding in order, padded with `9` to 81 characters.
pub fn derive_address(hash: &HashedId) -> TryteAddress {
    let mut buf = [TRYTE_ALPHABET[0]; ADDRESS_LEN];
    for (i, &b) in hash.as_bytes().iter().enumerate() {
        let pair = byte_to_trytes(b);
        buf[2 * i] = pair[0];
        buf[2 * i + 1] = pair[1];
    }
    TryteAddress(buf)
}
