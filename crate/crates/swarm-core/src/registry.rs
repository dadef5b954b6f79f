//! DDo registry: storage, registration rules, HTTP surface.
//!
//! The registry is the swarm's phone book. Registration is self-service
//! and permissionless but not blind: a device POSTs its DDo in compact
//! form wrapped in a signed envelope, and the registry checks that the
//! envelope's sender is the DDo's own DID and that the signature verifies
//! under a verification key listed *in that DDo*. Anyone can claim a fresh
//! random identifier; nobody can overwrite or squat someone else's.
//!
//! Canonical storage is the compact encoding exactly as received. The
//! verbose formats are derived on demand at fetch time, never stored.
//!
//! HTTP surface:
//!
//! * `POST /dids` with the signed envelope. `201` with the DID as text,
//!   `400` malformed, `401` bad signature or sender/document mismatch,
//!   `409` already registered.
//! * `GET /dids/{did}?format=json|cbor|cbor-di` (default `cbor-di`).
//!   `200` with the matching media type, `400` bad DID or format, `404`
//!   unknown.
//! * `GET /healthz` for liveness.

use crate::codec::{self, CodecError, WireFormat};
use crate::did::SwarmDid;
use crate::diotcomm::{self, EnvelopeError};
use axum::body::Bytes;
use axum::extract::{Path as UrlPath, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use serde::Deserialize;
use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{self, Write};
use std::path::Path;
use std::sync::{Arc, Mutex};

/// Keyed blob storage with create-if-absent semantics. Values are the
/// canonical compact document bytes.
pub trait RecordStore: Send + Sync + 'static {
    /// Stores `record` under `did` unless something is already there.
    /// Returns whether the record was created.
    fn create(&self, did: &SwarmDid, record: &[u8]) -> io::Result<bool>;
    fn get(&self, did: &SwarmDid) -> io::Result<Option<Vec<u8>>>;
}

/// Volatile store for tests and throwaway deployments.
#[derive(Default)]
pub struct MemoryStore {
    records: Mutex<HashMap<SwarmDid, Vec<u8>>>,
}

impl MemoryStore {
    pub fn new() -> Self {
        Self::default()
    }
}

impl RecordStore for MemoryStore {
    fn create(&self, did: &SwarmDid, record: &[u8]) -> io::Result<bool> {
        let mut records = self.records.lock().unwrap();
        if records.contains_key(did) {
            return Ok(false);
        }
        records.insert(*did, record.to_vec());
        Ok(true)
    }

    fn get(&self, did: &SwarmDid) -> io::Result<Option<Vec<u8>>> {
        Ok(self.records.lock().unwrap().get(did).cloned())
    }
}

/// Durable append-only store: one file, each record framed by a 4-byte
/// big-endian length. Records are full compact documents, so the file is
/// self-describing and the index is rebuilt by replay on open.
///
/// A crash can leave a partial frame at the tail; open() treats exactly
/// that as "the last write never happened", truncates it away and keeps
/// going. Anything else that fails to parse is real corruption and refuses
/// to open.
pub struct JournalStore {
    inner: Mutex<JournalInner>,
}

struct JournalInner {
    file: File,
    index: HashMap<SwarmDid, Vec<u8>>,
}

impl JournalStore {
    pub fn open(path: &Path) -> io::Result<Self> {
        let file = OpenOptions::new()
            .read(true)
            .append(true)
            .create(true)
            .open(path)?;
        let bytes = std::fs::read(path)?;

        let mut index = HashMap::new();
        let mut offset = 0usize;
        while bytes.len() - offset >= 4 {
            let len = u32::from_be_bytes(bytes[offset..offset + 4].try_into().unwrap()) as usize;
            if bytes.len() - offset - 4 < len {
                break; // partial frame: torn final write
            }
            let record = &bytes[offset + 4..offset + 4 + len];
            let doc = codec::decode(record, WireFormat::CborDi)
                .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e.to_string()))?;
            if index.insert(*doc.did(), record.to_vec()).is_some() {
                return Err(io::Error::new(
                    io::ErrorKind::InvalidData,
                    format!("journal lists {} twice", doc.did()),
                ));
            }
            offset += 4 + len;
        }
        if offset < bytes.len() {
            // Drop the torn tail so the next append starts on a frame
            // boundary instead of gluing onto garbage.
            file.set_len(offset as u64)?;
        }
        Ok(JournalStore {
            inner: Mutex::new(JournalInner { file, index }),
        })
    }
}

impl RecordStore for JournalStore {
    fn create(&self, did: &SwarmDid, record: &[u8]) -> io::Result<bool> {
        let mut inner = self.inner.lock().unwrap();
        if inner.index.contains_key(did) {
            return Ok(false);
        }
        let mut frame = Vec::with_capacity(4 + record.len());
        frame.extend_from_slice(&(record.len() as u32).to_be_bytes());
        frame.extend_from_slice(record);
        inner.file.write_all(&frame)?;
        inner.file.sync_data()?;
        inner.index.insert(*did, record.to_vec());
        Ok(true)
    }

    fn get(&self, did: &SwarmDid) -> io::Result<Option<Vec<u8>>> {
        Ok(self.inner.lock().unwrap().index.get(did).cloned())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RegisterError {
    #[error(transparent)]
    Envelope(#[from] EnvelopeError),
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error("{0} is already registered")]
    Duplicate(SwarmDid),
    #[error("store failure: {0}")]
    Store(#[from] io::Error),
}

#[derive(Debug, thiserror::Error)]
pub enum FetchError {
    #[error("store failure: {0}")]
    Store(#[from] io::Error),
    #[error("stored record no longer decodes: {0}")]
    Corrupt(#[from] CodecError),
}

#[derive(Clone)]
pub struct RegistryService {
    store: Arc<dyn RecordStore>,
}

impl RegistryService {
    pub fn new(store: Arc<dyn RecordStore>) -> Self {
        RegistryService { store }
    }

    /// Verifies a self-signed enrollment envelope and stores the document.
    ///
    /// The verification key comes from the submitted document itself; the
    /// binding that makes this safe is that the envelope sender must equal
    /// the document DID, so a signature by anyone else cannot claim it.
    pub fn register(&self, envelope: &[u8]) -> Result<SwarmDid, RegisterError> {
        let payload = diotcomm::signed_payload(envelope)?;
        let doc = codec::decode(&payload, WireFormat::CborDi)?;
        let did = *doc.did();
        let self_resolver: HashMap<SwarmDid, _> = [(did, doc)].into();
        diotcomm::verify(&self_resolver, envelope)?;
        if !self.store.create(&did, &payload)? {
            return Err(RegisterError::Duplicate(did));
        }
        Ok(did)
    }

    /// Returns the stored document in the requested format, or `None` when
    /// the DID is not registered.
    pub fn fetch(
        &self,
        did: &SwarmDid,
        format: WireFormat,
    ) -> Result<Option<Vec<u8>>, FetchError> {
        let Some(stored) = self.store.get(did)? else {
            return Ok(None);
        };
        if format == WireFormat::CborDi {
            return Ok(Some(stored));
        }
        Ok(Some(codec::convert(&stored, WireFormat::CborDi, format)?))
    }
}

pub fn router(service: RegistryService) -> Router {
    Router::new()
        .route("/dids", post(handle_register))
        .route("/dids/{did}", get(handle_fetch))
        .route("/healthz", get(|| async { "ok" }))
        .with_state(Arc::new(service))
}

/// Binds the service to `listener` and runs until ctrl-c.
pub async fn serve(
    listener: tokio::net::TcpListener,
    service: RegistryService,
) -> io::Result<()> {
    axum::serve(listener, router(service))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}

async fn handle_register(
    State(service): State<Arc<RegistryService>>,
    body: Bytes,
) -> Response {
    match service.register(&body) {
        Ok(did) => {
            let location = format!("/dids/{did}");
            (
                StatusCode::CREATED,
                [(header::LOCATION, location)],
                did.to_string(),
            )
                .into_response()
        }
        Err(e) => {
            let status = match &e {
                RegisterError::Envelope(
                    EnvelopeError::BadSignature
                    | EnvelopeError::UnknownSender(_)
                    | EnvelopeError::UnknownKey,
                ) => StatusCode::UNAUTHORIZED,
                RegisterError::Envelope(_) | RegisterError::Codec(_) => StatusCode::BAD_REQUEST,
                RegisterError::Duplicate(_) => StatusCode::CONFLICT,
                RegisterError::Store(_) => StatusCode::INTERNAL_SERVER_ERROR,
            };
            (status, e.to_string()).into_response()
        }
    }
}

#[derive(Deserialize)]
struct FetchParams {
    format: Option<String>,
}

async fn handle_fetch(
    State(service): State<Arc<RegistryService>>,
    UrlPath(did): UrlPath<String>,
    Query(params): Query<FetchParams>,
) -> Response {
    let did: SwarmDid = match did.parse() {
        Ok(did) => did,
        Err(e) => return (StatusCode::BAD_REQUEST, e.to_string()).into_response(),
    };
    let format = match params.format.as_deref() {
        None => WireFormat::CborDi,
        Some(token) => match token.parse::<WireFormat>() {
            Ok(format) => format,
            Err(e) => return (StatusCode::BAD_REQUEST, e.to_string()).into_response(),
        },
    };
    match service.fetch(&did, format) {
        Ok(Some(bytes)) => (
            StatusCode::OK,
            [(header::CONTENT_TYPE, format.media_type())],
            bytes,
        )
            .into_response(),
        Ok(None) => (StatusCode::NOT_FOUND, format!("{did} is not registered")).into_response(),
        Err(e) => (StatusCode::INTERNAL_SERVER_ERROR, e.to_string()).into_response(),
    }
}
