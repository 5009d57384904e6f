//! Station runtime: secured messages and receive-side revocation checking.
//!
//! A station checks the sender's certificate with a single ledger lookup
//! at the address derived from the certificate hash, so the cost never
//! depends on how many certificates are revoked. Stations without direct
//! ledger access may delegate the lookup to one neighbor (one hop, no
//! recursion); with no path at all the status is `Unknown` and the
//! message is ignored.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::certkit::{
    sign, verify, verify_chain, Certificate, HashedId, HashedIdLength, KeyPair, PrivateKey,
};
use crate::tangle::{derive_address, Ledger, RevocationPayload};

/// Station identifier.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StationId(pub String);

impl fmt::Display for StationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for StationId {
    fn from(s: &str) -> Self {
        Self(s.to_string())
    }
}

/// How the station reaches the ledger.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Connectivity {
    /// Queries the ledger itself.
    Direct,
    /// No own access; delegates lookups to neighbors.
    P2pOnly,
    /// No access at all.
    Offline,
}

/// Order of the receive pipeline stages. The default checks revocation
/// before the signature chain; the alternative exists for benchmarking the
/// swapped order.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CheckOrder {
    #[default]
    RevocationFirst,
    SignatureFirst,
}

/// Certificates the station trusts a priori.
#[derive(Clone, Debug)]
pub struct TrustAnchors {
    pub root_cert: Certificate,
    pub ra_cert: Certificate,
}

#[derive(Clone, Debug)]
pub struct StationConfig {
    pub id: StationId,
    pub connectivity: Connectivity,
    /// Tried in order when delegating; an empty list degrades to offline
    /// behavior.
    pub neighbor_ids: Vec<StationId>,
    pub trust_anchors: TrustAnchors,
    pub check_order: CheckOrder,
}

/// Revocation status of a certificate as seen by a station. `Unknown`
/// means no ledger access path existed, direct or delegated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RevocationStatus {
    Valid,
    Revoked,
    Unknown,
}

/// Outcome of the receive pipeline.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReceiveOutcome {
    Accepted,
    IgnoredRevoked,
    IgnoredUnknown,
    IgnoredBadSignature,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SendError {
    #[error("station holds no credential")]
    NoCredential,
    #[error("credential is outside its validity period")]
    ExpiredCredential,
}

/// A V2X message signed under a short-term certificate. The signature
/// covers `payload || generation_time || HashedId8(signer_cert)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SecuredMessage {
    pub payload: Vec<u8>,
    /// Unix milliseconds.
    pub generation_time_ms: u64,
    pub signer_cert: Certificate,
    pub signature: Vec<u8>,
}

impl SecuredMessage {
    fn signing_bytes(payload: &[u8], generation_time_ms: u64, signer_cert: &Certificate) -> Vec<u8> {
        let mut bytes = Vec::with_capacity(payload.len() + 16);
        bytes.extend_from_slice(payload);
        bytes.extend_from_slice(&generation_time_ms.to_be_bytes());
        bytes.extend_from_slice(signer_cert.hashed_id(HashedIdLength::Id8).as_bytes());
        bytes
    }

    /// Signs a message under `stc` with its private key.
    pub fn create(
        stc: &Certificate,
        private: &PrivateKey,
        payload: &[u8],
        generation_time_ms: u64,
    ) -> Self {
        let signature = sign(private, &Self::signing_bytes(payload, generation_time_ms, stc));
        Self {
            payload: payload.to_vec(),
            generation_time_ms,
            signer_cert: stc.clone(),
            signature,
        }
    }

    /// Verifies the message signature under the embedded certificate's key.
    pub fn verify_signature(&self) -> bool {
        verify(
            &self.signer_cert.public_key,
            &Self::signing_bytes(&self.payload, self.generation_time_ms, &self.signer_cert),
            &self.signature,
        )
    }
}

/// A station's credential: the pseudonym certificate and its keypair.
#[derive(Clone, Debug)]
pub struct Credential {
    pub stc: Certificate,
    pub keypair: KeyPair,
}

/// An OBU or RSU.
pub struct Station {
    config: StationConfig,
    credential: Option<Credential>,
    /// Authority certificates used to complete chains to the root.
    intermediates: Vec<Certificate>,
    hash_len: HashedIdLength,
    ledger: Arc<Ledger>,
}

impl Station {
    pub fn new(
        config: StationConfig,
        ledger: Arc<Ledger>,
        intermediates: Vec<Certificate>,
        hash_len: HashedIdLength,
    ) -> Self {
        Self {
            config,
            credential: None,
            intermediates,
            hash_len,
            ledger,
        }
    }

    pub fn id(&self) -> &StationId {
        &self.config.id
    }

    pub fn config(&self) -> &StationConfig {
        &self.config
    }

    pub fn install_credential(&mut self, stc: Certificate, keypair: KeyPair) {
        self.credential = Some(Credential { stc, keypair });
    }

    /// Builds a signed message, provided the station holds a credential
    /// valid at `now_ms`.
    pub fn send(&self, payload: &[u8], now_ms: u64) -> Result<SecuredMessage, SendError> {
        let credential = self.credential.as_ref().ok_or(SendError::NoCredential)?;
        if !credential.stc.is_valid_at(now_ms / 1000) {
            return Err(SendError::ExpiredCredential);
        }
        Ok(SecuredMessage::create(
            &credential.stc,
            credential.keypair.private(),
            payload,
            now_ms,
        ))
    }

    /// Revocation status of `cert` at `now_ms`, via the connectivity path
    /// configured for this station.
    pub fn check_revocation(
        &self,
        cert: &Certificate,
        now_ms: u64,
        network: &StationNetwork,
    ) -> RevocationStatus {
        self.check_hash(&cert.hashed_id(self.hash_len), now_ms, network)
    }

    /// Hash-level revocation check (what a delegating neighbor forwards).
    pub fn check_hash(
        &self,
        cert_hash: &HashedId,
        now_ms: u64,
        network: &StationNetwork,
    ) -> RevocationStatus {
        match self.config.connectivity {
            Connectivity::Direct => self.check_hash_direct(cert_hash, now_ms),
            Connectivity::P2pOnly => delegate_check(self, network, cert_hash, now_ms),
            Connectivity::Offline => RevocationStatus::Unknown,
        }
    }

    /// Single ledger lookup at the derived address.
    fn check_hash_direct(&self, cert_hash: &HashedId, now_ms: u64) -> RevocationStatus {
        check_hash_against_ledger(
            &self.ledger,
            &self.config.trust_anchors.ra_cert,
            self.hash_len,
            cert_hash,
            now_ms,
        )
    }

    /// Answer given to a delegating neighbor: own direct access only, never
    /// a further delegation hop.
    fn answer_delegated(&self, cert_hash: &HashedId, now_ms: u64) -> RevocationStatus {
        match self.config.connectivity {
            Connectivity::Direct => self.check_hash_direct(cert_hash, now_ms),
            _ => RevocationStatus::Unknown,
        }
    }

    /// Receive pipeline: revocation check, then certificate chain and
    /// message signature (or swapped, per configuration).
    pub fn receive(
        &self,
        msg: &SecuredMessage,
        now_ms: u64,
        network: &StationNetwork,
    ) -> ReceiveOutcome {
        match self.config.check_order {
            CheckOrder::RevocationFirst => {
                match self.check_revocation(&msg.signer_cert, now_ms, network) {
                    RevocationStatus::Revoked => ReceiveOutcome::IgnoredRevoked,
                    RevocationStatus::Unknown => ReceiveOutcome::IgnoredUnknown,
                    RevocationStatus::Valid => {
                        if self.verify_message(msg, now_ms) {
                            ReceiveOutcome::Accepted
                        } else {
                            ReceiveOutcome::IgnoredBadSignature
                        }
                    }
                }
            }
            CheckOrder::SignatureFirst => {
                if !self.verify_message(msg, now_ms) {
                    return ReceiveOutcome::IgnoredBadSignature;
                }
                match self.check_revocation(&msg.signer_cert, now_ms, network) {
                    RevocationStatus::Revoked => ReceiveOutcome::IgnoredRevoked,
                    RevocationStatus::Unknown => ReceiveOutcome::IgnoredUnknown,
                    RevocationStatus::Valid => ReceiveOutcome::Accepted,
                }
            }
        }
    }

    /// Chain verification (including validity windows) plus the message
    /// signature itself.
    fn verify_message(&self, msg: &SecuredMessage, now_ms: u64) -> bool {
        msg.verify_signature()
            && verify_chain(
                &msg.signer_cert,
                &self.intermediates,
                &self.config.trust_anchors.root_cert,
                now_ms / 1000,
            )
            .is_ok()
    }
}

/// Registry of stations reachable over P2P, with a reachability toggle to
/// model link failures.
#[derive(Default)]
pub struct StationNetwork {
    stations: HashMap<StationId, Arc<Station>>,
    unreachable: HashSet<StationId>,
}

impl StationNetwork {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, station: Arc<Station>) {
        self.stations.insert(station.id().clone(), station);
    }

    pub fn set_reachable(&mut self, id: &StationId, reachable: bool) {
        if reachable {
            self.unreachable.remove(id);
        } else {
            self.unreachable.insert(id.clone());
        }
    }

    pub fn get(&self, id: &StationId) -> Option<&Arc<Station>> {
        self.stations.get(id)
    }

    fn reachable(&self, id: &StationId) -> Option<&Arc<Station>> {
        if self.unreachable.contains(id) {
            return None;
        }
        self.stations.get(id)
    }
}

/// The one ledger query behind every revocation check. A certificate
/// counts as revoked only if some transaction at its derived address
/// carries a payload that names this hash and verifies under the trusted
/// RA certificate; anything else at the address is ignored.
pub fn check_hash_against_ledger(
    ledger: &Ledger,
    ra_cert: &Certificate,
    hash_len: HashedIdLength,
    cert_hash: &HashedId,
    now_ms: u64,
) -> RevocationStatus {
    let address = derive_address(cert_hash);
    let transactions = ledger.find_transactions(&address, now_ms);
    let ra_hash = ra_cert.hashed_id(hash_len);
    let revoked = transactions.iter().any(|tx| {
        RevocationPayload::decode(&tx.payload).is_ok_and(|payload| {
            payload.revoked_hash == *cert_hash
                && payload.ra_cert_hash == ra_hash
                && payload.verify(&ra_cert.public_key)
        })
    });
    if revoked {
        RevocationStatus::Revoked
    } else {
        RevocationStatus::Valid
    }
}

/// Delegated revocation check: the requester asks its neighbors, in
/// configured order, to run the lookup on its behalf. Unreachable
/// neighbors fall through to the next one; the first reachable neighbor's
/// answer is final, and `Unknown` from it becomes the requester's own
/// answer. One hop only.
pub fn delegate_check(
    requester: &Station,
    network: &StationNetwork,
    cert_hash: &HashedId,
    now_ms: u64,
) -> RevocationStatus {
    for neighbor_id in &requester.config.neighbor_ids {
        if let Some(neighbor) = network.reachable(neighbor_id) {
            return neighbor.answer_delegated(cert_hash, now_ms);
        }
    }
    RevocationStatus::Unknown
}
