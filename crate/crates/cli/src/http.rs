//! HTTP endpoints over the service core.
//!
//! All request and response bodies are JSON with lowercase-hex byte
//! fields. Errors map to 400 (malformed input), 403 (banned/rejected),
//! and 404 (unknown hash or address).

use std::sync::{Arc, Mutex};

use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};

use vpki_core::certkit::{canonical_decode, canonical_encode, CanonicalId, PublicKey};
use vpki_core::station::RevocationStatus;
use vpki_core::tangle::TryteAddress;

use crate::service::{ServiceCore, ServiceError};

pub type SharedCore = Arc<Mutex<ServiceCore>>;

pub fn shared(core: ServiceCore) -> SharedCore {
    Arc::new(Mutex::new(core))
}

/// Builds the service router.
pub fn router(core: SharedCore) -> Router {
    Router::new()
        .route("/preregister", post(preregister))
        .route("/enroll", post(enroll))
        .route("/authorize", post(authorize))
        .route("/misbehavior-report", post(misbehavior_report))
        .route("/resolve", post(resolve))
        .route("/revocation-status/{hash}", get(revocation_status))
        .route("/ledger-address/{address}", get(ledger_address))
        .with_state(core)
}

#[derive(Serialize)]
struct ErrorBody {
    error: String,
}

struct ApiError(ServiceError);

impl From<ServiceError> for ApiError {
    fn from(e: ServiceError) -> Self {
        Self(e)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = match &self.0 {
            ServiceError::Malformed(_) => StatusCode::BAD_REQUEST,
            ServiceError::Rejected(_) => StatusCode::FORBIDDEN,
            ServiceError::NotFound(_) => StatusCode::NOT_FOUND,
            ServiceError::Internal(_) => StatusCode::INTERNAL_SERVER_ERROR,
        };
        (
            status,
            Json(ErrorBody {
                error: self.0.to_string(),
            }),
        )
            .into_response()
    }
}

fn malformed(what: &str) -> ApiError {
    ApiError(ServiceError::Malformed(what.to_string()))
}

fn parse_canonical_id(hex_str: &str) -> Result<CanonicalId, ApiError> {
    CanonicalId::from_hex(hex_str).ok_or_else(|| malformed("bad canonical_id hex"))
}

fn parse_public_key(hex_str: &str) -> Result<PublicKey, ApiError> {
    let bytes = hex::decode(hex_str).map_err(|_| malformed("bad vehicle_pk hex"))?;
    PublicKey::try_from_slice(&bytes).ok_or_else(|| malformed("bad vehicle_pk length"))
}

#[derive(Deserialize)]
struct PreregisterRequest {
    canonical_id: String,
}

#[derive(Serialize)]
struct PreregisterResponse {
    newly_registered: bool,
}

async fn preregister(
    State(core): State<SharedCore>,
    Json(req): Json<PreregisterRequest>,
) -> Result<Json<PreregisterResponse>, ApiError> {
    let id = parse_canonical_id(&req.canonical_id)?;
    let newly_registered = core.lock().unwrap().preregister(id)?;
    Ok(Json(PreregisterResponse { newly_registered }))
}

#[derive(Deserialize)]
struct EnrollRequest {
    canonical_id: String,
    vehicle_pk: String,
}

#[derive(Serialize)]
struct CertificateResponse {
    certificate: String,
    hash: String,
}

async fn enroll(
    State(core): State<SharedCore>,
    Json(req): Json<EnrollRequest>,
) -> Result<Json<CertificateResponse>, ApiError> {
    let id = parse_canonical_id(&req.canonical_id)?;
    let pk = parse_public_key(&req.vehicle_pk)?;
    let mut core = core.lock().unwrap();
    let ltc = core.enroll(&id, &pk)?;
    Ok(Json(CertificateResponse {
        certificate: hex::encode(canonical_encode(&ltc).expect("issued cert encodes")),
        hash: ltc.hashed_id(core.hash_len()).to_hex(),
    }))
}

#[derive(Deserialize)]
struct AuthorizeRequest {
    /// Hex canonical encoding of the long-term certificate.
    ltc: String,
    vehicle_pk: String,
}

async fn authorize(
    State(core): State<SharedCore>,
    Json(req): Json<AuthorizeRequest>,
) -> Result<Json<CertificateResponse>, ApiError> {
    let ltc_bytes = hex::decode(&req.ltc).map_err(|_| malformed("bad ltc hex"))?;
    let ltc = canonical_decode(&ltc_bytes)
        .map_err(|e| malformed(&format!("bad ltc encoding: {e}")))?;
    let pk = parse_public_key(&req.vehicle_pk)?;
    let mut core = core.lock().unwrap();
    let stc = core.authorize(&ltc, &pk)?;
    Ok(Json(CertificateResponse {
        certificate: hex::encode(canonical_encode(&stc).expect("issued cert encodes")),
        hash: stc.hashed_id(core.hash_len()).to_hex(),
    }))
}

#[derive(Deserialize)]
struct ReportRequest {
    stc_hash: String,
    #[serde(default)]
    evidence: String,
    #[serde(default)]
    reporter: String,
}

#[derive(Serialize)]
struct ReportResponse {
    duplicate: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    tx_id: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    queryable_time_ms: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    resolved: Option<bool>,
}

async fn misbehavior_report(
    State(core): State<SharedCore>,
    Json(req): Json<ReportRequest>,
) -> Result<Json<ReportResponse>, ApiError> {
    let evidence = hex::decode(&req.evidence).map_err(|_| malformed("bad evidence hex"))?;
    let mut core = core.lock().unwrap();
    let hash = core.parse_hash(&req.stc_hash)?;
    let outcome = core.report(hash, evidence, req.reporter)?;
    Ok(Json(ReportResponse {
        duplicate: outcome.duplicate,
        tx_id: outcome.tx_id.map(|h| h.to_hex()),
        queryable_time_ms: outcome.queryable_time_ms,
        resolved: outcome.resolved,
    }))
}

#[derive(Deserialize)]
struct ResolveRequest {
    stc_hash: String,
}

#[derive(Serialize)]
struct ResolveResponse {
    canonical_id: String,
}

async fn resolve(
    State(core): State<SharedCore>,
    Json(req): Json<ResolveRequest>,
) -> Result<Json<ResolveResponse>, ApiError> {
    let mut core = core.lock().unwrap();
    let hash = core.parse_hash(&req.stc_hash)?;
    let id = core.resolve(hash)?;
    Ok(Json(ResolveResponse {
        canonical_id: id.to_hex(),
    }))
}

#[derive(Serialize)]
struct StatusResponse {
    hash: String,
    status: &'static str,
}

async fn revocation_status(
    State(core): State<SharedCore>,
    Path(hash): Path<String>,
) -> Result<Json<StatusResponse>, ApiError> {
    let core = core.lock().unwrap();
    let parsed = core.parse_hash(&hash)?;
    let status = match core.revocation_status(&parsed) {
        RevocationStatus::Revoked => "revoked",
        _ => "valid",
    };
    Ok(Json(StatusResponse {
        hash: parsed.to_hex(),
        status,
    }))
}

#[derive(Serialize)]
struct LedgerTxBody {
    tx_id: String,
    attach_time_ms: u64,
    payload: String,
}

#[derive(Serialize)]
struct LedgerAddressResponse {
    address: String,
    transactions: Vec<LedgerTxBody>,
}

async fn ledger_address(
    State(core): State<SharedCore>,
    Path(address): Path<String>,
) -> Result<Json<LedgerAddressResponse>, ApiError> {
    let parsed = TryteAddress::parse(&address)
        .map_err(|e| malformed(&format!("bad address: {e}")))?;
    let core = core.lock().unwrap();
    let transactions = core.ledger_transactions(&parsed);
    if transactions.is_empty() {
        return Err(ApiError(ServiceError::NotFound(format!(
            "no transactions at {parsed}"
        ))));
    }
    Ok(Json(LedgerAddressResponse {
        address: parsed.as_str().to_string(),
        transactions: transactions
            .into_iter()
            .map(|tx| LedgerTxBody {
                tx_id: tx.tx_id.to_hex(),
                attach_time_ms: tx.attach_time_ms,
                payload: hex::encode(tx.payload),
            })
            .collect(),
    }))
}
