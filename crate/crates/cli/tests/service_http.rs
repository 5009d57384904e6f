//! Endpoint behavior over the in-process router: the enroll → authorize →
//! report → status → resolve flow, error status codes, and restart
//! persistence with byte-identical read answers.

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use serde_json::{json, Value};
use tempfile::TempDir;
use tower::util::ServiceExt;

use vpki_cli::config::ServiceConfig;
use vpki_cli::http::{router, shared};
use vpki_cli::service::ServiceCore;
use vpki_core::certkit::generate_keypair;
use vpki_core::tangle::derive_address;
use vpki_core::HashedId;

struct TestService {
    _dir: TempDir,
    config: ServiceConfig,
    router: Router,
}

impl TestService {
    fn new() -> Self {
        let dir = tempfile::tempdir().unwrap();
        let config = ServiceConfig {
            store_path: dir.path().join("vpki.journal"),
            bootstrap_seed: 42,
            ..Default::default()
        };
        let core = ServiceCore::open(&config).unwrap();
        Self {
            _dir: dir,
            config: config.clone(),
            router: router(shared(core)),
        }
    }

    fn restart(&mut self) {
        let core = ServiceCore::open(&self.config).unwrap();
        self.router = router(shared(core));
    }

    async fn post(&self, path: &str, body: Value) -> (StatusCode, Vec<u8>) {
        let request = Request::post(path)
            .header("content-type", "application/json")
            .body(Body::from(body.to_string()))
            .unwrap();
        let response = self.router.clone().oneshot(request).await.unwrap();
        let status = response.status();
        let bytes = axum::body::to_bytes(response.into_body(), 1 << 20)
            .await
            .unwrap();
        (status, bytes.to_vec())
    }

    async fn get(&self, path: &str) -> (StatusCode, Vec<u8>) {
        let request = Request::get(path).body(Body::empty()).unwrap();
        let response = self.router.clone().oneshot(request).await.unwrap();
        let status = response.status();
        let bytes = axum::body::to_bytes(response.into_body(), 1 << 20)
            .await
            .unwrap();
        (status, bytes.to_vec())
    }

    async fn post_json(&self, path: &str, body: Value) -> (StatusCode, Value) {
        let (status, bytes) = self.post(path, body).await;
        (status, serde_json::from_slice(&bytes).unwrap())
    }

    async fn get_json(&self, path: &str) -> (StatusCode, Value) {
        let (status, bytes) = self.get(path).await;
        (status, serde_json::from_slice(&bytes).unwrap())
    }

    /// Registers, enrolls, and authorizes a vehicle; returns the STC hash.
    async fn provision_vehicle(&self, canonical_hex: &str) -> String {
        let (status, _) = self
            .post_json("/preregister", json!({ "canonical_id": canonical_hex }))
            .await;
        assert_eq!(status, StatusCode::OK);

        let vehicle_pk = hex::encode(generate_keypair(None).public().as_bytes());
        let (status, enroll) = self
            .post_json(
                "/enroll",
                json!({ "canonical_id": canonical_hex, "vehicle_pk": vehicle_pk }),
            )
            .await;
        assert_eq!(status, StatusCode::OK);

        let stc_pk = hex::encode(generate_keypair(None).public().as_bytes());
        let (status, authorize) = self
            .post_json(
                "/authorize",
                json!({ "ltc": enroll["certificate"], "vehicle_pk": stc_pk }),
            )
            .await;
        assert_eq!(status, StatusCode::OK);
        authorize["hash"].as_str().unwrap().to_string()
    }
}

fn canonical_hex(tag: &str) -> String {
    hex::encode(tag.as_bytes())
}

#[tokio::test]
async fn report_then_status_flow() {
    let service = TestService::new();
    let stc_hash = service.provision_vehicle(&canonical_hex("V-0001")).await;

    let (status, before) = service
        .get_json(&format!("/revocation-status/{stc_hash}"))
        .await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(before["status"], "valid");

    let (status, report) = service
        .post_json(
            "/misbehavior-report",
            json!({ "stc_hash": stc_hash, "evidence": "aa", "reporter": "rsu-1" }),
        )
        .await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(report["duplicate"], false);
    assert_eq!(report["resolved"], true);

    // Zero publish latency: queryable immediately.
    let (status, after) = service
        .get_json(&format!("/revocation-status/{stc_hash}"))
        .await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(after["status"], "revoked");

    // Duplicate reports are acknowledged but change nothing.
    let (status, dup) = service
        .post_json("/misbehavior-report", json!({ "stc_hash": stc_hash }))
        .await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(dup["duplicate"], true);
}

#[tokio::test]
async fn unknown_hash_reads_valid() {
    let service = TestService::new();
    let unknown = vpki_core::hashed_id_of(b"nobody", vpki_core::HashedIdLength::Id8);
    let (status, body) = service
        .get_json(&format!("/revocation-status/{}", unknown.to_hex()))
        .await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["status"], "valid");
}

#[tokio::test]
async fn resolve_returns_the_canonical_id_and_bans_it() {
    let service = TestService::new();
    let id_hex = canonical_hex("V-0002");
    let stc_hash = service.provision_vehicle(&id_hex).await;

    let (status, resolved) = service
        .post_json("/resolve", json!({ "stc_hash": stc_hash }))
        .await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(resolved["canonical_id"], id_hex);

    // Banned subject can no longer enroll: 403.
    let pk = hex::encode(generate_keypair(None).public().as_bytes());
    let (status, _) = service
        .post_json(
            "/enroll",
            json!({ "canonical_id": id_hex, "vehicle_pk": pk }),
        )
        .await;
    assert_eq!(status, StatusCode::FORBIDDEN);
}

#[tokio::test]
async fn error_status_codes() {
    let service = TestService::new();

    // 400: malformed hex and wrong hash lengths.
    let (status, _) = service
        .post_json("/resolve", json!({ "stc_hash": "zz" }))
        .await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, _) = service.get("/revocation-status/abcd").await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, _) = service.get("/ledger-address/not-an-address").await;
    assert_eq!(status, StatusCode::BAD_REQUEST);

    // 404: unknown hash on resolve, enrolment without preregistration,
    // empty ledger address.
    let unknown = vpki_core::hashed_id_of(b"x", vpki_core::HashedIdLength::Id8).to_hex();
    let (status, _) = service
        .post_json("/resolve", json!({ "stc_hash": unknown }))
        .await;
    assert_eq!(status, StatusCode::NOT_FOUND);

    let pk = hex::encode(generate_keypair(None).public().as_bytes());
    let (status, _) = service
        .post_json(
            "/enroll",
            json!({ "canonical_id": canonical_hex("V-9999"), "vehicle_pk": pk }),
        )
        .await;
    assert_eq!(status, StatusCode::NOT_FOUND);

    let empty_address = "9".repeat(81);
    let (status, _) = service.get(&format!("/ledger-address/{empty_address}")).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn ledger_address_lists_transactions() {
    let service = TestService::new();
    let stc_hash = service.provision_vehicle(&canonical_hex("V-0003")).await;
    service
        .post_json("/misbehavior-report", json!({ "stc_hash": stc_hash }))
        .await;

    let address = derive_address(&HashedId::from_hex(&stc_hash).unwrap());
    let (status, body) = service
        .get_json(&format!("/ledger-address/{}", address.as_str()))
        .await;
    assert_eq!(status, StatusCode::OK);
    let txs = body["transactions"].as_array().unwrap();
    assert_eq!(txs.len(), 1);
    assert!(txs[0]["payload"].as_str().unwrap().len() > 40);
}

#[tokio::test]
async fn restart_preserves_answers_byte_for_byte() {
    let mut service = TestService::new();
    let mut status_paths = Vec::new();
    let mut resolve_bodies = Vec::new();

    for i in 0..8 {
        let id_hex = canonical_hex(&format!("V-{i:04}"));
        let stc_hash = service.provision_vehicle(&id_hex).await;
        if i % 2 == 0 {
            service
                .post_json("/misbehavior-report", json!({ "stc_hash": stc_hash }))
                .await;
        }
        status_paths.push(format!("/revocation-status/{stc_hash}"));
        resolve_bodies.push(json!({ "stc_hash": stc_hash }));
    }

    let mut before = Vec::new();
    for path in &status_paths {
        before.push(service.get(path).await);
    }
    for body in &resolve_bodies {
        before.push(service.post("/resolve", body.clone()).await);
    }

    service.restart();

    let mut after = Vec::new();
    for path in &status_paths {
        after.push(service.get(path).await);
    }
    for body in &resolve_bodies {
        after.push(service.post("/resolve", body.clone()).await);
    }

    assert_eq!(before, after, "restart changed an answer");
}

#[tokio::test]
async fn restart_keeps_issuing_under_the_same_authorities() {
    let mut service = TestService::new();
    let stc_before = service.provision_vehicle(&canonical_hex("V-A")).await;
    service.restart();
    // New issuance after restart must chain to the same RA/root so earlier
    // revocations still verify; provisioning succeeds end to end.
    let stc_after = service.provision_vehicle(&canonical_hex("V-B")).await;
    assert_ne!(stc_before, stc_after);

    service
        .post_json("/misbehavior-report", json!({ "stc_hash": stc_before }))
        .await;
    let (_, body) = service
        .get_json(&format!("/revocation-status/{stc_before}"))
        .await;
    assert_eq!(body["status"], "revoked");
}
