//! Command-line behavior through the real binary.

use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn vpki() -> Command {
    Command::new(env!("CARGO_BIN_EXE_vpki"))
}

fn run(args: &[&str], dir: &Path) -> Output {
    vpki()
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout_of(output: &Output) -> String {
    assert!(
        output.status.success(),
        "command failed: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    String::from_utf8(output.stdout.clone()).unwrap()
}

#[test]
fn bench_check_writes_a_nine_cell_metrics_file() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("m.csv");
    let output = run(
        &[
            "bench-check",
            "--revoked",
            "50,100,150",
            "--freq",
            "1,2,10",
            "--seed",
            "7",
            "--duration",
            "5",
            "--out",
            out.to_str().unwrap(),
        ],
        dir.path(),
    );
    assert!(output.status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("kind,revoked_count,frequency_hz,mean_ms,max_ms,p95_ms,n")
    );
    // Row-count oracle: 3 counts x 3 frequencies.
    assert_eq!(lines.count(), 9);
}

#[test]
fn bench_check_is_byte_reproducible_across_runs() {
    let dir = TempDir::new().unwrap();
    let args_for = |name: &str| {
        vec![
            "bench-check".to_string(),
            "--revoked".into(),
            "40,80".into(),
            "--freq".into(),
            "1,2".into(),
            "--seed".into(),
            "7".into(),
            "--duration".into(),
            "5".into(),
            "--out".into(),
            dir.path().join(name).to_str().unwrap().to_string(),
        ]
    };
    for name in ["a.csv", "b.csv"] {
        let args: Vec<String> = args_for(name);
        let arg_refs: Vec<&str> = args.iter().map(String::as_str).collect();
        assert!(run(&arg_refs, dir.path()).status.success());
    }
    let a = std::fs::read(dir.path().join("a.csv")).unwrap();
    let b = std::fs::read(dir.path().join("b.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn bench_check_emits_sample_and_cdf_dumps() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("m.csv");
    let samples = dir.path().join("samples.csv");
    let cdf = dir.path().join("cdf.csv");
    let output = run(
        &[
            "bench-check",
            "--revoked",
            "30",
            "--freq",
            "2",
            "--duration",
            "10",
            "--out",
            out.to_str().unwrap(),
            "--samples",
            samples.to_str().unwrap(),
            "--cdf",
            cdf.to_str().unwrap(),
        ],
        dir.path(),
    );
    assert!(output.status.success());
    let samples_text = std::fs::read_to_string(&samples).unwrap();
    assert_eq!(samples_text.lines().count(), 1 + 20); // header + 10s * 2Hz
    assert!(samples_text.starts_with("kind,revoked_count,frequency_hz,value_ms"));
    let cdf_text = std::fs::read_to_string(&cdf).unwrap();
    assert!(cdf_text.starts_with("kind,revoked_count,frequency_hz,value_ms,cumulative_probability"));
    assert!(cdf_text.lines().count() > 1);
}

#[test]
fn bench_window_and_crl_run() {
    let dir = TempDir::new().unwrap();
    let window_out = dir.path().join("w.csv");
    let output = run(
        &[
            "bench-window",
            "--revocations",
            "100",
            "--seed",
            "3",
            "--out",
            window_out.to_str().unwrap(),
        ],
        dir.path(),
    );
    assert!(output.status.success());
    let text = std::fs::read_to_string(&window_out).unwrap();
    assert!(text.lines().nth(1).unwrap().starts_with("publish,100,0,"));

    let crl_out = dir.path().join("c.csv");
    let output = run(
        &[
            "bench-crl",
            "--revoked",
            "100,200",
            "--freq",
            "1",
            "--duration",
            "20",
            "--cost-us",
            "1.0",
            "--out",
            crl_out.to_str().unwrap(),
        ],
        dir.path(),
    );
    assert!(output.status.success());
    let text = std::fs::read_to_string(&crl_out).unwrap();
    assert!(text.lines().any(|l| l.starts_with("crl,100,1,")));
    assert!(text.lines().any(|l| l.starts_with("crl_miss,200,1,")));
}

#[test]
fn bootstrap_revoke_status_resolve_flow() {
    let dir = TempDir::new().unwrap();
    let store = dir.path().join("flow.journal");
    let store_arg = store.to_str().unwrap();

    let boot = run(&["bootstrap", "--store", store_arg, "--seed", "9"], dir.path());
    let boot_text = stdout_of(&boot);
    assert!(boot_text.contains("root: "));

    // A hash that was never revoked reads valid.
    let hash = "00112233445566aa";
    let status = run(&["status", hash, "--store", store_arg], dir.path());
    assert_eq!(stdout_of(&status).trim(), "valid");

    // revoke then status: revoked (default Zero publish latency).
    let revoke = run(&["revoke", hash, "--store", store_arg], dir.path());
    assert!(stdout_of(&revoke).contains("tx_id: "));
    let status = run(&["status", hash, "--store", store_arg], dir.path());
    assert_eq!(stdout_of(&status).trim(), "revoked");

    // The journal survives: a fresh process still sees it revoked.
    let status = run(&["status", hash, "--store", store_arg], dir.path());
    assert_eq!(stdout_of(&status).trim(), "revoked");

    // resolve of an unissued hash exits nonzero with a message.
    let resolve = run(&["resolve", hash, "--store", store_arg], dir.path());
    assert!(!resolve.status.success());
    assert!(!resolve.stderr.is_empty());
}

#[test]
fn malformed_hash_fails_with_nonzero_exit() {
    let dir = TempDir::new().unwrap();
    let store = dir.path().join("bad.journal");
    let output = run(
        &["status", "nothex", "--store", store.to_str().unwrap()],
        dir.path(),
    );
    assert!(!output.status.success());
}

#[test]
fn config_file_drives_the_scenario() {
    let dir = TempDir::new().unwrap();
    let config_path = dir.path().join("vpki.toml");
    std::fs::write(
        &config_path,
        r#"
            [scenario]
            revoked_counts = [25]
            frequencies_hz = [5]
            duration_s = 4
            seed = 1

            [scenario.check_latency_model]
            kind = "constant"
            ms = 10.0
        "#,
    )
    .unwrap();
    let out = dir.path().join("m.csv");
    let output = run(
        &[
            "bench-check",
            "--config",
            config_path.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ],
        dir.path(),
    );
    assert!(output.status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(
        text.lines().nth(1),
        Some("check,25,5,10.000000,10.000000,10.000000,20")
    );
}
