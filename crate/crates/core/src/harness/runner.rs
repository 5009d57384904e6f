//! Benchmark runners: revoked-count and frequency sweeps for the ledger
//! checker, the publication-window measurement, the linear-scan CRL
//! baseline, and the ground-truth oracle scenario.

use std::collections::HashSet;
use std::sync::Arc;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::authorities::{BootstrapConfig, MisbehaviorReport, VpkiSystem};
use crate::certkit::{generate_keypair, CanonicalId, Certificate, HashedId, PrivateKey};
use crate::station::{
    CheckOrder, Connectivity, ReceiveOutcome, SecuredMessage, Station, StationConfig,
    StationNetwork, TrustAnchors,
};
use crate::tangle::LatencyModel;

use super::stats::DelayStats;
use super::{ConfigInvalid, ScenarioConfig};

// Stream tags keeping per-purpose RNGs independent within a cell.
const STREAM_PICK: u64 = 1;
const STREAM_DELAY: u64 = 2;
const STREAM_KEYGEN: u64 = 3;
const STREAM_ORACLE: u64 = 4;
const STREAM_WINDOW: u64 = 5;

/// Deterministic stream split: derives an independent sub-seed.
fn mix_seed(base: u64, a: u64, b: u64) -> u64 {
    let mut x = base
        ^ a.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ b.wrapping_mul(0xD1B5_4A32_D192_ED03);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

struct Sender {
    stc: Certificate,
    private: PrivateKey,
    hash: HashedId,
    revoked: bool,
}

/// A fully provisioned single-cell world: issued pool, populated ledger,
/// and a connected receiver.
struct CellWorld {
    system: VpkiSystem,
    receiver: Station,
    network: StationNetwork,
    senders: Vec<Sender>,
    ground_truth: HashSet<HashedId>,
    /// First virtual instant at which every published revocation is
    /// queryable.
    start_ms: u64,
}

fn build_cell_world(
    seed: u64,
    pool_size: usize,
    revoked_count: usize,
    publish_model: LatencyModel,
) -> CellWorld {
    assert!(revoked_count <= pool_size);
    let mut system = VpkiSystem::bootstrap(
        BootstrapConfig {
            seed,
            ..Default::default()
        },
        publish_model,
    );
    let mut keygen_rng = ChaCha20Rng::seed_from_u64(mix_seed(seed, STREAM_KEYGEN, 0));
    let hash_len = system.hash_len();

    let mut senders = Vec::with_capacity(pool_size);
    for i in 0..pool_size {
        let id = CanonicalId::new(format!("V-{i:07}").into_bytes()).unwrap();
        system.preregister(id.clone());
        let vehicle_seed: [u8; 32] = keygen_rng.random();
        let vehicle_kp = generate_keypair(Some(&vehicle_seed));
        let ltc = system
            .enroll(&id, vehicle_kp.public(), 0)
            .expect("pool enrolment");
        let stc_seed: [u8; 32] = keygen_rng.random();
        let stc_kp = generate_keypair(Some(&stc_seed));
        let stc = system
            .authorize(&ltc, stc_kp.public(), 0)
            .expect("pool authorization");
        let hash = stc.hashed_id(hash_len);
        senders.push(Sender {
            stc,
            private: stc_kp.private().clone(),
            hash,
            revoked: i < revoked_count,
        });
    }

    let mut ground_truth = HashSet::new();
    let mut latest_queryable = 0u64;
    for sender in senders.iter().filter(|s| s.revoked) {
        let (_, receipt) = system.publish_revocation(&sender.hash, 0);
        latest_queryable = latest_queryable.max(receipt.queryable_time_ms);
        ground_truth.insert(sender.hash);
    }

    let certs = system.certs();
    let receiver = Station::new(
        StationConfig {
            id: "receiver".into(),
            connectivity: Connectivity::Direct,
            neighbor_ids: Vec::new(),
            trust_anchors: TrustAnchors {
                root_cert: certs.root.clone(),
                ra_cert: certs.ra.clone(),
            },
            check_order: CheckOrder::default(),
        },
        Arc::clone(system.ledger()),
        vec![certs.stca, certs.ltca],
        hash_len,
    );

    CellWorld {
        system,
        receiver,
        network: StationNetwork::new(),
        senders,
        ground_truth,
        start_ms: latest_queryable + 1,
    }
}

/// Per-cell results of the ledger-checker sweep.
#[derive(Clone, Debug)]
pub struct CheckCell {
    pub revoked_count: usize,
    pub frequency_hz: u32,
    pub stats: DelayStats,
    pub samples: Vec<f64>,
    pub events: usize,
    /// Receive decisions disagreeing with the ground-truth revoked set.
    pub decision_mismatches: usize,
    /// Ledger queries issued by the single check of each event.
    pub min_queries_per_check: u64,
    pub max_queries_per_check: u64,
}

#[derive(Clone, Debug)]
pub struct CheckBenchmark {
    pub cells: Vec<CheckCell>,
}

impl CheckBenchmark {
    pub fn cell(&self, revoked_count: usize, frequency_hz: u32) -> Option<&CheckCell> {
        self.cells
            .iter()
            .find(|c| c.revoked_count == revoked_count && c.frequency_hz == frequency_hz)
    }
}

fn pool_size_for(revoked_count: usize, fraction: f64) -> usize {
    ((revoked_count as f64) / fraction).ceil() as usize
}

/// Sweeps (revoked count x message frequency) cells. Each cell populates a
/// fresh ledger with RA-signed revocations, streams messages from a pool
/// whose revoked share is `revoked_fraction`, records one end-to-end check
/// delay per receive, and cross-checks every decision against the ground
/// truth.
pub fn run_check_benchmark(config: &ScenarioConfig) -> Result<CheckBenchmark, ConfigInvalid> {
    config.validate()?;
    let mut cells = Vec::new();
    for &revoked_count in &config.revoked_counts {
        for &frequency_hz in &config.frequencies_hz {
            let cell_seed = mix_seed(config.seed, revoked_count as u64, u64::from(frequency_hz));
            let world = build_cell_world(
                cell_seed,
                pool_size_for(revoked_count, config.revoked_fraction),
                revoked_count,
                config.publish_latency_model,
            );
            let cell = run_check_cell(config, &world, revoked_count, frequency_hz, cell_seed);
            cells.push(cell);
        }
    }
    Ok(CheckBenchmark { cells })
}

fn run_check_cell(
    config: &ScenarioConfig,
    world: &CellWorld,
    revoked_count: usize,
    frequency_hz: u32,
    cell_seed: u64,
) -> CheckCell {
    let mut pick_rng = ChaCha20Rng::seed_from_u64(mix_seed(cell_seed, STREAM_PICK, 0));
    let mut delay_rng = ChaCha20Rng::seed_from_u64(mix_seed(cell_seed, STREAM_DELAY, 0));
    let events = (config.duration_s * u64::from(frequency_hz)) as usize;

    let mut samples = Vec::with_capacity(events);
    let mut decision_mismatches = 0usize;
    let mut min_queries = u64::MAX;
    let mut max_queries = 0u64;

    for event in 0..events {
        let at_ms = world.start_ms + (event as u64 * 1000) / u64::from(frequency_hz);
        let sender = &world.senders[pick_rng.random_range(0..world.senders.len())];
        let msg = SecuredMessage::create(
            &sender.stc,
            &sender.private,
            &(event as u64).to_be_bytes(),
            at_ms,
        );

        let queries_before = world.system.ledger().query_count();
        let outcome = world.receiver.receive(&msg, at_ms, &world.network);
        let queries = world.system.ledger().query_count() - queries_before;
        min_queries = min_queries.min(queries);
        max_queries = max_queries.max(queries);

        let expected = if world.ground_truth.contains(&sender.hash) {
            ReceiveOutcome::IgnoredRevoked
        } else {
            ReceiveOutcome::Accepted
        };
        if outcome != expected {
            decision_mismatches += 1;
        }

        samples.push(config.check_latency_model.sample(&mut delay_rng));
    }

    CheckCell {
        revoked_count,
        frequency_hz,
        stats: DelayStats::from_samples(&samples).expect("events >= 1"),
        samples,
        events,
        decision_mismatches,
        min_queries_per_check: min_queries,
        max_queries_per_check: max_queries,
    }
}

/// Ground-truth oracle run over a single cell sized by `n_certificates` and
/// `revoked_fraction`.
#[derive(Clone, Debug)]
pub struct OracleReport {
    pub events: usize,
    pub revoked_senders_seen: usize,
    pub valid_senders_seen: usize,
    pub false_positives: usize,
    pub false_negatives: usize,
    pub other_mismatches: usize,
}

/// Streams `n_events` receives against a pool of `n_certificates` vehicles
/// (`revoked_fraction` of them revoked) and compares every pipeline
/// decision with the plain ground-truth set.
pub fn run_oracle_scenario(
    config: &ScenarioConfig,
    n_events: usize,
) -> Result<OracleReport, ConfigInvalid> {
    config.validate()?;
    if n_events == 0 {
        return Err(ConfigInvalid("n_events must be positive".into()));
    }
    let revoked_count = (config.n_certificates as f64 * config.revoked_fraction).round() as usize;
    let cell_seed = mix_seed(config.seed, STREAM_ORACLE, 0);
    let world = build_cell_world(
        cell_seed,
        config.n_certificates,
        revoked_count,
        config.publish_latency_model,
    );

    let mut pick_rng = ChaCha20Rng::seed_from_u64(mix_seed(cell_seed, STREAM_PICK, 0));
    let mut report = OracleReport {
        events: n_events,
        revoked_senders_seen: 0,
        valid_senders_seen: 0,
        false_positives: 0,
        false_negatives: 0,
        other_mismatches: 0,
    };

    for event in 0..n_events {
        let at_ms = world.start_ms + event as u64;
        let sender = &world.senders[pick_rng.random_range(0..world.senders.len())];
        let msg = SecuredMessage::create(
            &sender.stc,
            &sender.private,
            &(event as u64).to_be_bytes(),
            at_ms,
        );
        let outcome = world.receiver.receive(&msg, at_ms, &world.network);
        let truly_revoked = world.ground_truth.contains(&sender.hash);
        if truly_revoked {
            report.revoked_senders_seen += 1;
        } else {
            report.valid_senders_seen += 1;
        }
        match (truly_revoked, outcome) {
            (true, ReceiveOutcome::IgnoredRevoked) | (false, ReceiveOutcome::Accepted) => {}
            (false, ReceiveOutcome::IgnoredRevoked) => report.false_positives += 1,
            (true, ReceiveOutcome::Accepted) => report.false_negatives += 1,
            _ => report.other_mismatches += 1,
        }
    }
    Ok(report)
}

/// Publication-window measurement: report-to-queryable time per revocation.
#[derive(Clone, Debug)]
pub struct WindowBenchmark {
    pub n_revocations: usize,
    pub stats: DelayStats,
    pub samples: Vec<f64>,
}

/// Issues `n_revocations` credentials, reports each one, and measures the
/// vulnerability window: from misbehavior report to the revocation being
/// queryable on the ledger.
pub fn run_window_benchmark(
    config: &ScenarioConfig,
    n_revocations: usize,
) -> Result<WindowBenchmark, ConfigInvalid> {
    config.validate()?;
    if n_revocations == 0 {
        return Err(ConfigInvalid("n_revocations must be positive".into()));
    }
    let cell_seed = mix_seed(config.seed, STREAM_WINDOW, 0);
    let mut system = VpkiSystem::bootstrap(
        BootstrapConfig {
            seed: cell_seed,
            ..Default::default()
        },
        config.publish_latency_model,
    );
    let mut keygen_rng = ChaCha20Rng::seed_from_u64(mix_seed(cell_seed, STREAM_KEYGEN, 0));
    let hash_len = system.hash_len();

    let mut hashes = Vec::with_capacity(n_revocations);
    for i in 0..n_revocations {
        let id = CanonicalId::new(format!("W-{i:07}").into_bytes()).unwrap();
        system.preregister(id.clone());
        let vehicle_seed: [u8; 32] = keygen_rng.random();
        let vehicle_kp = generate_keypair(Some(&vehicle_seed));
        let ltc = system.enroll(&id, vehicle_kp.public(), 0).unwrap();
        let stc_seed: [u8; 32] = keygen_rng.random();
        let stc_kp = generate_keypair(Some(&stc_seed));
        let stc = system.authorize(&ltc, stc_kp.public(), 0).unwrap();
        hashes.push(stc.hashed_id(hash_len));
    }

    let mut samples = Vec::with_capacity(n_revocations);
    for (i, hash) in hashes.into_iter().enumerate() {
        let report_time_s = i as u64 + 1;
        let outcome = system
            .report_misbehavior(MisbehaviorReport {
                reported_stc_hash: hash,
                evidence: Vec::new(),
                reporter: "harness".into(),
                report_time: report_time_s,
            })
            .expect("distinct hashes are never duplicates");
        let report_ms = report_time_s * 1000;
        samples.push((outcome.receipt.queryable_time_ms - report_ms) as f64);
    }

    Ok(WindowBenchmark {
        n_revocations,
        stats: DelayStats::from_samples(&samples).expect("n >= 1"),
        samples,
    })
}

/// Per-cell results of the CRL baseline.
#[derive(Clone, Debug)]
pub struct CrlCell {
    pub revoked_count: usize,
    pub frequency_hz: u32,
    pub stats: DelayStats,
    pub hit_stats: Option<DelayStats>,
    pub miss_stats: Option<DelayStats>,
    pub samples: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct CrlBenchmark {
    pub per_entry_cost_us: f64,
    pub cells: Vec<CrlCell>,
}

impl CrlBenchmark {
    pub fn cell(&self, revoked_count: usize, frequency_hz: u32) -> Option<&CrlCell> {
        self.cells
            .iter()
            .find(|c| c.revoked_count == revoked_count && c.frequency_hz == frequency_hz)
    }
}

/// Same workload shape as the ledger sweep, but the checker linearly scans
/// an in-memory revocation list at a configurable per-entry cost. Misses
/// scan the whole list; hits scan up to the match.
pub fn run_crl_baseline(
    config: &ScenarioConfig,
    per_entry_cost_us: f64,
) -> Result<CrlBenchmark, ConfigInvalid> {
    config.validate()?;
    if !(per_entry_cost_us.is_finite() && per_entry_cost_us > 0.0) {
        return Err(ConfigInvalid("per-entry cost must be positive".into()));
    }
    let mut cells = Vec::new();
    for &revoked_count in &config.revoked_counts {
        for &frequency_hz in &config.frequencies_hz {
            let cell_seed = mix_seed(config.seed, revoked_count as u64, u64::from(frequency_hz));
            let pool_size = pool_size_for(revoked_count, config.revoked_fraction);

            // Synthetic certificate hashes; the scan only compares ids.
            let pool: Vec<HashedId> = (0..pool_size)
                .map(|i| {
                    crate::certkit::hashed_id_of(
                        &(cell_seed ^ i as u64).to_be_bytes(),
                        crate::certkit::HashedIdLength::Id8,
                    )
                })
                .collect();
            let crl: Vec<HashedId> = pool[..revoked_count].to_vec();

            let mut pick_rng = ChaCha20Rng::seed_from_u64(mix_seed(cell_seed, STREAM_PICK, 0));
            let events = (config.duration_s * u64::from(frequency_hz)) as usize;
            let mut samples = Vec::with_capacity(events);
            let mut hit_samples = Vec::new();
            let mut miss_samples = Vec::new();

            for _ in 0..events {
                let sender = &pool[pick_rng.random_range(0..pool.len())];
                let scanned = match crl.iter().position(|h| h == sender) {
                    Some(position) => position + 1,
                    None => crl.len(),
                };
                let delay_ms = scanned as f64 * per_entry_cost_us / 1000.0;
                samples.push(delay_ms);
                if crl.contains(sender) {
                    hit_samples.push(delay_ms);
                } else {
                    miss_samples.push(delay_ms);
                }
            }

            cells.push(CrlCell {
                revoked_count,
                frequency_hz,
                stats: DelayStats::from_samples(&samples).expect("events >= 1"),
                hit_stats: DelayStats::from_samples(&hit_samples).ok(),
                miss_stats: DelayStats::from_samples(&miss_samples).ok(),
                samples,
            });
        }
    }
    Ok(CrlBenchmark {
        per_entry_cost_us,
        cells,
    })
}
