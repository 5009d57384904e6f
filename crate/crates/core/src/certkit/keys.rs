//! Key material and the signature contract used throughout the PKI.
//!
//! The scheme is deliberately abstracted behind `generate_keypair` /
//! [`sign`] / [`verify`]: callers never touch the backend types. The
//! current backend is Ed25519, which is deterministic (same key and
//! message always produce the same signature) and gives ~128-bit
//! security.

use ed25519_dalek::{Signature, Signer, SigningKey, Verifier, VerifyingKey};
use sha2::{Digest, Sha256};
use std::fmt;

/// Length of an encoded public key in bytes.
pub const PUBLIC_KEY_LEN: usize = 32;
/// Length of an encoded signature in bytes.
pub const SIGNATURE_LEN: usize = 64;

/// Public half of a keypair. Opaque bytes to everything outside this module.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PublicKey([u8; PUBLIC_KEY_LEN]);

impl PublicKey {
    pub fn from_bytes(bytes: [u8; PUBLIC_KEY_LEN]) -> Self {
        Self(bytes)
    }

    /// Parses a public key from a slice; fails on any length mismatch.
    pub fn try_from_slice(bytes: &[u8]) -> Option<Self> {
        let arr: [u8; PUBLIC_KEY_LEN] = bytes.try_into().ok()?;
        Some(Self(arr))
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.0)
    }
}

impl fmt::Debug for PublicKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PublicKey({})", self.to_hex())
    }
}

/// Private half of a keypair. Never serialized into certificates or wire
/// messages; `Debug` is redacted.
#[derive(Clone, PartialEq, Eq)]
pub struct PrivateKey([u8; 32]);

impl PrivateKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

impl fmt::Debug for PrivateKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("PrivateKey(..)")
    }
}

/// A signing keypair.
#[derive(Clone, Debug)]
pub struct KeyPair {
    public: PublicKey,
    private: PrivateKey,
}

impl KeyPair {
    pub fn public(&self) -> &PublicKey {
        &self.public
    }

    pub fn private(&self) -> &PrivateKey {
        &self.private
    }
}

/// Generates a keypair. With `Some(seed)` the result is a pure function of
/// the seed bytes (test and replay mode); with `None` fresh OS randomness
/// is drawn.
pub fn generate_keypair(seed: Option<&[u8]>) -> KeyPair {
    let secret: [u8; 32] = match seed {
        Some(bytes) => Sha256::digest(bytes).into(),
        None => rand::random(),
    };
    let signing = SigningKey::from_bytes(&secret);
    KeyPair {
        public: PublicKey(signing.verifying_key().to_bytes()),
        private: PrivateKey(secret),
    }
}

/// Signs `message` with `private`, returning the detached signature bytes.
pub fn sign(private: &PrivateKey, message: &[u8]) -> Vec<u8> {
    let signing = SigningKey::from_bytes(&private.0);
    signing.sign(message).to_bytes().to_vec()
}

/// Verifies `signature` over `message` under `public`. Returns `false` for
/// any malformed key or signature; never panics or errors.
pub fn verify(public: &PublicKey, message: &[u8], signature: &[u8]) -> bool {
    let Ok(verifying) = VerifyingKey::from_bytes(&public.0) else {
        return false;
    };
    let Ok(sig_bytes) = <[u8; SIGNATURE_LEN]>::try_from(signature) else {
        return false;
    };
    verifying
        .verify(message, &Signature::from_bytes(&sig_bytes))
        .is_ok()
}
