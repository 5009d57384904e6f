//! Configuration file: one TOML document with optional `[scenario]`,
//! `[service]`, and `[crl]` sections, each falling back to defaults.

use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::{Deserialize, Serialize};

use vpki_core::authorities::BootstrapConfig;
use vpki_core::certkit::HashedIdLength;
use vpki_core::harness::ScenarioConfig;
use vpki_core::tangle::LatencyModel;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ServiceConfig {
    /// `host:port` the HTTP service binds to.
    pub listen: String,
    /// Append-only journal backing all authority and ledger state.
    pub store_path: PathBuf,
    /// Truncated-hash length used for records, addresses, and payloads.
    pub hash_id_length: u8,
    /// Seed for the deterministic authority key material.
    pub bootstrap_seed: u64,
    /// Attach-to-queryable delay model for revocations published by the
    /// service (the journal pins queryable times across restarts).
    pub publish_latency_model: LatencyModel,
    pub not_before: u64,
    pub not_after: u64,
    pub ltc_validity_s: u64,
    pub stc_validity_s: u64,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        let defaults = BootstrapConfig::default();
        Self {
            listen: "127.0.0.1:8480".to_string(),
            store_path: PathBuf::from("vpki.journal"),
            hash_id_length: 8,
            bootstrap_seed: 0,
            publish_latency_model: LatencyModel::Zero,
            not_before: defaults.not_before,
            not_after: defaults.not_after,
            ltc_validity_s: defaults.ltc_validity_s,
            stc_validity_s: defaults.stc_validity_s,
        }
    }
}

impl ServiceConfig {
    pub fn hash_len(&self) -> anyhow::Result<HashedIdLength> {
        HashedIdLength::from_len(self.hash_id_length as usize)
            .with_context(|| format!("hash_id_length {} not one of 3/8/10", self.hash_id_length))
    }

    pub fn bootstrap_config(&self) -> anyhow::Result<BootstrapConfig> {
        Ok(BootstrapConfig {
            seed: self.bootstrap_seed,
            not_before: self.not_before,
            not_after: self.not_after,
            hash_len: self.hash_len()?,
            ltc_validity_s: self.ltc_validity_s,
            stc_validity_s: self.stc_validity_s,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CrlConfig {
    /// Virtual cost of comparing one CRL entry, in microseconds.
    pub per_entry_cost_us: f64,
}

impl Default for CrlConfig {
    fn default() -> Self {
        Self {
            per_entry_cost_us: 1.0,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AppConfig {
    pub scenario: ScenarioConfig,
    pub service: ServiceConfig,
    pub crl: CrlConfig,
}

impl AppConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    /// Loads the file when given, otherwise the defaults.
    pub fn load_or_default(path: Option<&Path>) -> anyhow::Result<Self> {
        match path {
            Some(path) => Self::load(path),
            None => Ok(Self::default()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_gives_defaults() {
        let config: AppConfig = toml::from_str("").unwrap();
        assert_eq!(config, AppConfig::default());
    }

    #[test]
    fn sections_override_selectively() {
        let text = r#"
            [scenario]
            seed = 99
            duration_s = 5

            [scenario.check_latency_model]
            kind = "constant"
            ms = 10.0

            [service]
            listen = "0.0.0.0:9000"
            hash_id_length = 10

            [crl]
            per_entry_cost_us = 2.5
        "#;
        let config: AppConfig = toml::from_str(text).unwrap();
        assert_eq!(config.scenario.seed, 99);
        assert_eq!(config.scenario.duration_s, 5);
        assert_eq!(
            config.scenario.check_latency_model,
            LatencyModel::Constant { ms: 10.0 }
        );
        // Untouched fields keep their defaults.
        assert_eq!(config.scenario.revoked_counts, vec![500, 5_000, 10_000]);
        assert_eq!(config.service.listen, "0.0.0.0:9000");
        assert_eq!(config.service.hash_len().unwrap(), HashedIdLength::Id10);
        assert_eq!(config.crl.per_entry_cost_us, 2.5);
    }

    #[test]
    fn bad_hash_length_is_rejected() {
        let config: AppConfig = toml::from_str("[service]\nhash_id_length = 7\n").unwrap();
        assert!(config.service.hash_len().is_err());
    }
}
