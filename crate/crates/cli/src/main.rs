use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

use vpki_cli::config::AppConfig;
use vpki_cli::http;
use vpki_cli::service::ServiceCore;
use vpki_core::harness::{
    run_check_benchmark, run_crl_baseline, run_window_benchmark, write_cdf_csv, write_metrics_csv,
    write_samples_csv, CdfRow, MetricsRow, SampleRow, ScenarioConfig,
};
use vpki_core::station::RevocationStatus;

#[derive(Parser)]
#[command(
    name = "vpki",
    version,
    about = "Ledger-backed certificate revocation for vehicular PKI: service, ad-hoc operations, and benchmarks"
)]
struct Cli {
    /// TOML configuration file with [scenario], [service], and [crl]
    /// sections.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct StoreArgs {
    /// Journal path (overrides the config file).
    #[arg(long)]
    store: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Metrics CSV output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Per-sample dump file (CSV).
    #[arg(long)]
    samples: Option<PathBuf>,
    /// Empirical CDF points file (CSV).
    #[arg(long)]
    cdf: Option<PathBuf>,
    /// RNG seed (overrides the config file).
    #[arg(long)]
    seed: Option<u64>,
    /// Revoked-population sweep, comma-separated.
    #[arg(long, value_delimiter = ',')]
    revoked: Option<Vec<usize>>,
    /// Message frequencies in Hz, comma-separated.
    #[arg(long, value_delimiter = ',')]
    freq: Option<Vec<u32>>,
    /// Virtual duration per cell, in seconds.
    #[arg(long)]
    duration: Option<u64>,
}

impl BenchArgs {
    fn apply(&self, mut scenario: ScenarioConfig) -> ScenarioConfig {
        if let Some(seed) = self.seed {
            scenario.seed = seed;
        }
        if let Some(revoked) = &self.revoked {
            scenario.revoked_counts = revoked.clone();
        }
        if let Some(freq) = &self.freq {
            scenario.frequencies_hz = freq.clone();
        }
        if let Some(duration) = self.duration {
            scenario.duration_s = duration;
        }
        scenario
    }
}

#[derive(Subcommand)]
enum Command {
    /// Create the store and print the authority certificate hashes.
    Bootstrap {
        #[command(flatten)]
        store: StoreArgs,
        /// Bootstrap seed (overrides the config file).
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run the HTTP service.
    Serve {
        #[command(flatten)]
        store: StoreArgs,
        /// host:port to bind (overrides the config file).
        #[arg(long)]
        listen: Option<String>,
    },
    /// Revocation-checking delay sweep over revoked counts and frequencies.
    BenchCheck {
        #[command(flatten)]
        bench: BenchArgs,
    },
    /// Vulnerability-window measurement: report to queryable revocation.
    BenchWindow {
        #[command(flatten)]
        bench: BenchArgs,
        /// Number of revocations to measure.
        #[arg(long, default_value_t = 10_000)]
        revocations: usize,
    },
    /// Linear-scan CRL baseline on the checking workload.
    BenchCrl {
        #[command(flatten)]
        bench: BenchArgs,
        /// Virtual cost per scanned CRL entry, in microseconds.
        #[arg(long)]
        cost_us: Option<f64>,
    },
    /// Publish a revocation for a certificate hash (lowercase hex).
    Revoke {
        hash: String,
        #[command(flatten)]
        store: StoreArgs,
    },
    /// Query the revocation status of a certificate hash.
    Status {
        hash: String,
        #[command(flatten)]
        store: StoreArgs,
    },
    /// Resolve a pseudonym certificate hash to its canonical id and ban it.
    Resolve {
        hash: String,
        #[command(flatten)]
        store: StoreArgs,
    },
}

fn main() -> anyhow::Result<()> {
    let cli = Cli::parse();
    let mut config = AppConfig::load_or_default(cli.config.as_deref())?;

    match cli.command {
        Command::Bootstrap { store, seed } => {
            if let Some(path) = store.store {
                config.service.store_path = path;
            }
            if let Some(seed) = seed {
                config.service.bootstrap_seed = seed;
            }
            let core = ServiceCore::open(&config.service)?;
            let certs = core.certs();
            let len = core.hash_len();
            println!("store: {}", config.service.store_path.display());
            println!("root: {}", certs.root.hashed_id(len));
            println!("ltca: {}", certs.ltca.hashed_id(len));
            println!("stca: {}", certs.stca.hashed_id(len));
            println!("ra:   {}", certs.ra.hashed_id(len));
            println!("ma:   {}", certs.ma.hashed_id(len));
            Ok(())
        }
        Command::Serve { store, listen } => {
            if let Some(path) = store.store {
                config.service.store_path = path;
            }
            if let Some(listen) = listen {
                config.service.listen = listen;
            }
            serve(&config)
        }
        Command::BenchCheck { bench } => {
            let scenario = bench.apply(config.scenario.clone());
            let result = run_check_benchmark(&scenario)?;
            let mismatches: usize = result.cells.iter().map(|c| c.decision_mismatches).sum();
            anyhow::ensure!(mismatches == 0, "{mismatches} decisions disagreed with ground truth");
            write_outputs(
                &bench,
                result.metrics_rows(),
                result.sample_rows(),
                result.cdf_rows(),
            )
        }
        Command::BenchWindow {
            bench,
            revocations,
        } => {
            let scenario = bench.apply(config.scenario.clone());
            let result = run_window_benchmark(&scenario, revocations)?;
            write_outputs(
                &bench,
                result.metrics_rows(),
                result.sample_rows(),
                result.cdf_rows(),
            )
        }
        Command::BenchCrl { bench, cost_us } => {
            let scenario = bench.apply(config.scenario.clone());
            let cost = cost_us.unwrap_or(config.crl.per_entry_cost_us);
            let result = run_crl_baseline(&scenario, cost)?;
            write_outputs(
                &bench,
                result.metrics_rows(),
                result.sample_rows(),
                result.cdf_rows(),
            )
        }
        Command::Revoke { hash, store } => {
            let mut core = open_store(&mut config, store)?;
            let hash = core.parse_hash(&hash)?;
            let (tx_id, queryable_time_ms) = core.revoke(hash)?;
            println!("tx_id: {tx_id}");
            println!("queryable_time_ms: {queryable_time_ms}");
            Ok(())
        }
        Command::Status { hash, store } => {
            let core = open_store(&mut config, store)?;
            let hash = core.parse_hash(&hash)?;
            match core.revocation_status(&hash) {
                RevocationStatus::Revoked => println!("revoked"),
                _ => println!("valid"),
            }
            Ok(())
        }
        Command::Resolve { hash, store } => {
            let mut core = open_store(&mut config, store)?;
            let hash = core.parse_hash(&hash)?;
            let id = core.resolve(hash)?;
            println!("{}", id.to_hex());
            Ok(())
        }
    }
}

fn open_store(config: &mut AppConfig, store: StoreArgs) -> anyhow::Result<ServiceCore> {
    if let Some(path) = store.store {
        config.service.store_path = path;
    }
    ServiceCore::open(&config.service)
}

fn serve(config: &AppConfig) -> anyhow::Result<()> {
    let core = ServiceCore::open(&config.service)?;
    let router = http::router(http::shared(core));
    let listen = config.service.listen.clone();
    let runtime = tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()?;
    runtime.block_on(async move {
        let listener = tokio::net::TcpListener::bind(&listen)
            .await
            .with_context(|| format!("binding {listen}"))?;
        eprintln!("listening on {listen}");
        axum::serve(listener, router).await?;
        Ok(())
    })
}

fn write_outputs(
    bench: &BenchArgs,
    metrics: Vec<MetricsRow>,
    samples: Vec<SampleRow>,
    cdf: Vec<CdfRow>,
) -> anyhow::Result<()> {
    match &bench.out {
        Some(path) => {
            let file = File::create(path)
                .with_context(|| format!("creating {}", path.display()))?;
            let mut w = BufWriter::new(file);
            write_metrics_csv(&mut w, &metrics)?;
            w.flush()?;
            eprintln!("wrote {} rows to {}", metrics.len(), path.display());
        }
        None => {
            let stdout = std::io::stdout();
            write_metrics_csv(stdout.lock(), &metrics)?;
        }
    }
    if let Some(path) = &bench.samples {
        let mut w = BufWriter::new(
            File::create(path).with_context(|| format!("creating {}", path.display()))?,
        );
        write_samples_csv(&mut w, &samples)?;
        w.flush()?;
        eprintln!("wrote {} samples to {}", samples.len(), path.display());
    }
    if let Some(path) = &bench.cdf {
        let mut w = BufWriter::new(
            File::create(path).with_context(|| format!("creating {}", path.display()))?,
        );
        write_cdf_csv(&mut w, &cdf)?;
        w.flush()?;
        eprintln!("wrote {} cdf points to {}", cdf.len(), path.display());
    }
    Ok(())
}
