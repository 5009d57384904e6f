//! Tryte addresses, zero-value transactions, and the ledger store.
//!
//! Revocation information lives at an address derived deterministically
//! from the revoked certificate's hash, so checking a certificate is a
//! single address lookup regardless of how many certificates have ever
//! been revoked.

mod latency;
mod ledger;
mod transaction;
mod trytes;

pub use latency::{LatencyModel, LatencyModelError};
pub use ledger::{AttachReceipt, DumpError, Ledger};
pub use transaction::{PayloadError, RevocationPayload, ZeroValueTransaction};
pub use trytes::{byte_to_trytes, derive_address, AddressError, TryteAddress, ADDRESS_LEN, TRYTE_ALPHABET};
