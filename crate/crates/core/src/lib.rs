//! Ledger-backed certificate revocation for vehicular networks.
//!
//! The crate is organized around the lifecycle of a revocation:
//!
//! - [`certkit`] — certificates, canonical encoding, signatures, and
//!   truncated whole-certificate hashes.
//! - [`tangle`] — tryte addresses derived from certificate hashes,
//!   zero-value revocation transactions, and a permanent address-indexed
//!   ledger with a pluggable latency model.
//! - [`authorities`] — the certification authorities: enrolment,
//!   pseudonym authorization, misbehavior reporting, revocation
//!   publication, and identity resolution with banning.
//! - [`station`] — the on-board/road-side runtime: secured messages,
//!   receive-side revocation checks, peer-delegated checks, and the
//!   offline-ignore policy.
//! - [`harness`] — a virtual-time scenario runner producing delay
//!   statistics, CDFs, and a linear-scan CRL baseline for contrast.

pub mod authorities;
pub mod certkit;
pub mod harness;
pub mod station;
pub mod tangle;

pub use certkit::{
    canonical_decode, canonical_encode, generate_keypair, hashed_id_of, sign, verify,
    verify_chain, whole_certificate_hash, CanonicalId, Certificate, CertificateKind, HashedId,
    HashedIdLength, KeyPair, PrivateKey, PublicKey,
};
pub use authorities::{
    BanList, BootstrapConfig, IssuanceRecord, MisbehaviorReport, RevocationOutcome, VpkiSystem,
};
pub use station::{
    ReceiveOutcome, RevocationStatus, SecuredMessage, Station, StationConfig, StationId,
    StationNetwork,
};
pub use tangle::{
    byte_to_trytes, derive_address, LatencyModel, Ledger, RevocationPayload, TryteAddress,
    ZeroValueTransaction,
};
