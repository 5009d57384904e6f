//! The certification authorities and their interactions.
//!
//! Five roles share a domain: the root anchor, the long-term CA (LTCA)
//! handling enrolment and the ban list, the short-term CA (STCA) issuing
//! pseudonym certificates after LTCA validation, the misbehavior
//! authority (MA) collecting reports, and the resolution authority (RA)
//! publishing revocations and resolving pseudonyms back to canonical
//! identities.
//!
//! Knowledge is split on purpose: the STCA records map a pseudonym
//! certificate only to its backing long-term certificate; only the LTCA
//! can take the second step from there to a canonical identity. The RA
//! orchestrates the two-step join during resolution.

mod ltca;
mod ra;
mod stca;
mod system;

pub use ltca::{BanList, Ltca, LtcaValidationError};
pub use ra::Ra;
pub use stca::Stca;
pub use system::{AuthorityCerts, BootstrapConfig, RevocationOutcome, VpkiSystem};

use thiserror::Error;

use crate::certkit::{CanonicalId, HashedId};

/// Per-issuance bookkeeping entry shared by LTCA and STCA stores.
///
/// For an LTCA record `parent_ref` is all-zero and `subject` carries the
/// canonical identity. For an STCA record `parent_ref` is the backing LTC
/// hash and `subject` is always `None`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IssuanceRecord {
    pub issued_cert_hash: HashedId,
    pub parent_ref: HashedId,
    pub subject: Option<CanonicalId>,
    /// Unix seconds.
    pub issue_time: u64,
}

/// A misbehavior report handed to the MA. Evidence contents are opaque to
/// the revocation pipeline.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MisbehaviorReport {
    pub reported_stc_hash: HashedId,
    pub evidence: Vec<u8>,
    pub reporter: String,
    /// Unix seconds.
    pub report_time: u64,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EnrollError {
    #[error("canonical identifier is banned")]
    BannedSubject,
    #[error("canonical identifier is not pre-registered")]
    NotPreRegistered,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AuthorizeError {
    #[error("LTCA rejected the long-term certificate (banned or unknown)")]
    LtcaRejected,
    #[error("long-term certificate is outside its validity period")]
    ExpiredLtc,
    #[error("long-term certificate chain does not verify")]
    BadChain,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ResolveError {
    #[error("identity resolution failed: no issuance path for the reported hash")]
    ResolutionFailed,
}
