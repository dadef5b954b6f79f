//! HTTP client for the registry.

use crate::codec::{self, WireFormat};
use crate::did::SwarmDid;
use crate::diotcomm::Resolver;
use crate::document::DidDocument;
use std::time::Duration;

#[derive(Debug, thiserror::Error)]
pub enum ClientError {
    #[error("invalid registry URL {0:?}")]
    BadUrl(String),
    #[error("registry unreachable: {0}")]
    Network(String),
    #[error("{0} is not registered")]
    NotFound(SwarmDid),
    #[error("registry refused the request ({status}): {message}")]
    Refused { status: u16, message: String },
    #[error("registry returned an invalid document: {0}")]
    BadDocument(#[from] codec::CodecError),
}

pub struct RegistryClient {
    base: String,
    agent: ureq::Agent,
}

impl RegistryClient {
    /// `base_url` is the registry root, e.g. `http://10.0.0.1:8000`.
    pub fn new(base_url: &str) -> Result<Self, ClientError> {
        let parsed =
            url::Url::parse(base_url).map_err(|_| ClientError::BadUrl(base_url.to_owned()))?;
        if !matches!(parsed.scheme(), "http" | "https") {
            return Err(ClientError::BadUrl(base_url.to_owned()));
        }
        let agent: ureq::Agent = ureq::Agent::config_builder()
            .http_status_as_error(false)
            .timeout_global(Some(Duration::from_secs(10)))
            .build()
            .into();
        Ok(RegistryClient {
            base: base_url.trim_end_matches('/').to_owned(),
            agent,
        })
    }

    /// Submits a signed enrollment envelope. Returns the registered DID as
    /// confirmed by the registry.
    pub fn register(&self, envelope: &[u8]) -> Result<SwarmDid, ClientError> {
        let url = format!("{}/dids", self.base);
        let mut res = self
            .agent
            .post(&url)
            .content_type("application/cbor")
            .send(envelope)
            .map_err(|e| ClientError::Network(e.to_string()))?;
        let status = res.status().as_u16();
        let body = res
            .body_mut()
            .read_to_string()
            .map_err(|e| ClientError::Network(e.to_string()))?;
        if status != 201 {
            return Err(ClientError::Refused {
                status,
                message: body,
            });
        }
        body.trim()
            .parse()
            .map_err(|_| ClientError::Network("registry returned a bad DID".into()))
    }

    /// Fetches the raw document bytes in the requested format.
    pub fn fetch(&self, did: &SwarmDid, format: WireFormat) -> Result<Vec<u8>, ClientError> {
        let url = format!("{}/dids/{}?format={}", self.base, did, format.token());
        let mut res = self
            .agent
            .get(&url)
            .call()
            .map_err(|e| ClientError::Network(e.to_string()))?;
        let status = res.status().as_u16();
        let body = res
            .body_mut()
            .read_to_vec()
            .map_err(|e| ClientError::Network(e.to_string()))?;
        match status {
            200 => Ok(body),
            404 => Err(ClientError::NotFound(*did)),
            _ => Err(ClientError::Refused {
                status,
                message: String::from_utf8_lossy(&body).into_owned(),
            }),
        }
    }

    /// Fetches and fully validates a document.
    pub fn resolve_document(&self, did: &SwarmDid) -> Result<DidDocument, ClientError> {
        let bytes = self.fetch(did, WireFormat::CborDi)?;
        let doc = codec::decode(&bytes, WireFormat::CborDi)?;
        if doc.did() != did {
            return Err(ClientError::Refused {
                status: 200,
                message: "registry returned a document for a different DID".into(),
            });
        }
        Ok(doc)
    }

    pub fn health(&self) -> Result<(), ClientError> {
        let url = format!("{}/healthz", self.base);
        let res = self
            .agent
            .get(&url)
            .call()
            .map_err(|e| ClientError::Network(e.to_string()))?;
        if res.status().as_u16() == 200 {
            Ok(())
        } else {
            Err(ClientError::Refused {
                status: res.status().as_u16(),
                message: "health check failed".into(),
            })
        }
    }
}

/// Live resolution through the registry. Any failure reads as "unknown";
/// callers that must distinguish network trouble from absence use
/// [`RegistryClient::fetch`] directly.
impl Resolver for RegistryClient {
    fn resolve(&self, did: &SwarmDid) -> Option<DidDocument> {
        self.resolve_document(did).ok()
    }
}
