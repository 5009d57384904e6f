//! Append-only journal: the persistence format behind the service.
//!
//! One event per line, tab-separated, led by an event-type token. Byte
//! strings are lowercase hex; ledger addresses are raw 81-character tryte
//! strings. State is reconstructed by replaying the file from the top, so
//! the first line is always the `bootstrap` event that pins key material
//! and protocol parameters.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use thiserror::Error;

use vpki_core::authorities::BootstrapConfig;
use vpki_core::certkit::{CanonicalId, HashedId, HashedIdLength};
use vpki_core::tangle::TryteAddress;

#[derive(Debug, Error)]
pub enum JournalError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("journal line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("journal does not start with a bootstrap event")]
    MissingBootstrap,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum JournalEvent {
    Bootstrap {
        seed: u64,
        not_before: u64,
        not_after: u64,
        hash_len: HashedIdLength,
        ltc_validity_s: u64,
        stc_validity_s: u64,
    },
    Prereg {
        id: CanonicalId,
    },
    Enroll {
        ltc_hash: HashedId,
        id: CanonicalId,
        issue_time: u64,
    },
    Authorize {
        stc_hash: HashedId,
        ltc_hash: HashedId,
        issue_time: u64,
    },
    Report {
        stc_hash: HashedId,
    },
    Ban {
        id: CanonicalId,
        ban_time: u64,
    },
    Attach {
        address: TryteAddress,
        attach_time_ms: u64,
        queryable_time_ms: u64,
        payload: Vec<u8>,
    },
}

impl JournalEvent {
    pub fn bootstrap(config: &BootstrapConfig) -> Self {
        Self::Bootstrap {
            seed: config.seed,
            not_before: config.not_before,
            not_after: config.not_after,
            hash_len: config.hash_len,
            ltc_validity_s: config.ltc_validity_s,
            stc_validity_s: config.stc_validity_s,
        }
    }

    pub fn to_line(&self) -> String {
        match self {
            Self::Bootstrap {
                seed,
                not_before,
                not_after,
                hash_len,
                ltc_validity_s,
                stc_validity_s,
            } => format!(
                "bootstrap\t{seed}\t{not_before}\t{not_after}\t{}\t{ltc_validity_s}\t{stc_validity_s}",
                hash_len.len()
            ),
            Self::Prereg { id } => format!("prereg\t{}", id.to_hex()),
            Self::Enroll {
                ltc_hash,
                id,
                issue_time,
            } => format!("enroll\t{}\t{}\t{issue_time}", ltc_hash.to_hex(), id.to_hex()),
            Self::Authorize {
                stc_hash,
                ltc_hash,
                issue_time,
            } => format!(
                "authorize\t{}\t{}\t{issue_time}",
                stc_hash.to_hex(),
                ltc_hash.to_hex()
            ),
            Self::Report { stc_hash } => format!("report\t{}", stc_hash.to_hex()),
            Self::Ban { id, ban_time } => format!("ban\t{}\t{ban_time}", id.to_hex()),
            Self::Attach {
                address,
                attach_time_ms,
                queryable_time_ms,
                payload,
            } => format!(
                "attach\t{address}\t{attach_time_ms}\t{queryable_time_ms}\t{}",
                hex::encode(payload)
            ),
        }
    }

    fn parse(line: &str, line_no: usize) -> Result<Self, JournalError> {
        let malformed = |reason: &str| JournalError::Malformed {
            line: line_no,
            reason: reason.to_string(),
        };
        let fields: Vec<&str> = line.split('\t').collect();
        let expect_len = |n: usize| {
            if fields.len() == n {
                Ok(())
            } else {
                Err(malformed(&format!("expected {n} fields, got {}", fields.len())))
            }
        };
        let parse_u64 = |s: &str, what: &str| {
            s.parse::<u64>()
                .map_err(|_| malformed(&format!("bad {what} `{s}`")))
        };
        let parse_hash = |s: &str, what: &str| {
            HashedId::from_hex(s).ok_or_else(|| malformed(&format!("bad {what} hex `{s}`")))
        };
        let parse_id = |s: &str| {
            CanonicalId::from_hex(s).ok_or_else(|| malformed("bad canonical id hex"))
        };

        match fields[0] {
            "bootstrap" => {
                expect_len(7)?;
                let hash_len_n = parse_u64(fields[4], "hash length")? as usize;
                Ok(Self::Bootstrap {
                    seed: parse_u64(fields[1], "seed")?,
                    not_before: parse_u64(fields[2], "not_before")?,
                    not_after: parse_u64(fields[3], "not_after")?,
                    hash_len: HashedIdLength::from_len(hash_len_n)
                        .ok_or_else(|| malformed("hash length not one of 3/8/10"))?,
                    ltc_validity_s: parse_u64(fields[5], "ltc validity")?,
                    stc_validity_s: parse_u64(fields[6], "stc validity")?,
                })
            }
            "prereg" => {
                expect_len(2)?;
                Ok(Self::Prereg {
                    id: parse_id(fields[1])?,
                })
            }
            "enroll" => {
                expect_len(4)?;
                Ok(Self::Enroll {
                    ltc_hash: parse_hash(fields[1], "ltc hash")?,
                    id: parse_id(fields[2])?,
                    issue_time: parse_u64(fields[3], "issue time")?,
                })
            }
            "authorize" => {
                expect_len(4)?;
                Ok(Self::Authorize {
                    stc_hash: parse_hash(fields[1], "stc hash")?,
                    ltc_hash: parse_hash(fields[2], "ltc hash")?,
                    issue_time: parse_u64(fields[3], "issue time")?,
                })
            }
            "report" => {
                expect_len(2)?;
                Ok(Self::Report {
                    stc_hash: parse_hash(fields[1], "stc hash")?,
                })
            }
            "ban" => {
                expect_len(3)?;
                Ok(Self::Ban {
                    id: parse_id(fields[1])?,
                    ban_time: parse_u64(fields[2], "ban time")?,
                })
            }
            "attach" => {
                expect_len(5)?;
                Ok(Self::Attach {
                    address: TryteAddress::parse(fields[1])
                        .map_err(|e| malformed(&e.to_string()))?,
                    attach_time_ms: parse_u64(fields[2], "attach time")?,
                    queryable_time_ms: parse_u64(fields[3], "queryable time")?,
                    payload: hex::decode(fields[4]).map_err(|_| malformed("bad payload hex"))?,
                })
            }
            other => Err(malformed(&format!("unknown event type `{other}`"))),
        }
    }
}

/// Append handle; every event is flushed and synced before the write call
/// returns, so a completed request survives a crash.
pub struct Journal {
    file: File,
}

impl Journal {
    pub fn open_append(path: &Path) -> Result<Self, JournalError> {
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        Ok(Self { file })
    }

    pub fn append(&mut self, event: &JournalEvent) -> Result<(), JournalError> {
        self.file.write_all(event.to_line().as_bytes())?;
        self.file.write_all(b"\n")?;
        self.file.sync_data()?;
        Ok(())
    }
}

/// Reads and parses the whole journal; empty and missing files yield an
/// empty event list.
pub fn read_journal(path: &Path) -> Result<Vec<JournalEvent>, JournalError> {
    if !path.exists() {
        return Ok(Vec::new());
    }
    let reader = BufReader::new(File::open(path)?);
    let mut events = Vec::new();
    for (line_no, line) in reader.lines().enumerate() {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        events.push(JournalEvent::parse(&line, line_no + 1)?);
    }
    Ok(events)
}
