//! DID documents and agent identities.
//!
//! A `DidDocument` (DDo) binds a `did:sw` identifier to at least one
//! verification key, at least one agreement key, and at least one service
//! endpoint. Construction validates the whole shape, so a `DidDocument`
//! value is always publishable. `AgentIdentity` pairs a document with the
//! matching private key material.

use crate::did::SwarmDid;
use crate::keys::{self, KeyId, KeyRole, PublicKeyEntry, SECRET_KEY_LEN};
use rand::CryptoRng;
use std::collections::{BTreeMap, HashSet};
use url::Url;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DocumentError {
    #[error("a DDo needs at least one verification key")]
    NoVerificationKey,
    #[error("a DDo needs at least one agreement key")]
    NoAgreementKey,
    #[error("a DDo needs at least one service endpoint")]
    NoEndpoint,
    #[error("key listed under the wrong section for its role")]
    RoleSectionMismatch,
    #[error("duplicate key id {0}")]
    DuplicateKeyId(String),
    #[error("duplicate endpoint id {0:?}")]
    DuplicateEndpointId(String),
    #[error("endpoint url {0:?} is not an absolute URL")]
    InvalidEndpointUrl(String),
    #[error(transparent)]
    Key(#[from] keys::KeyError),
}

/// A service endpoint. `id` and `service_type` are optional metadata; the
/// compact wire format carries only the URL, so fresh identities leave them
/// unset. The URL keeps the exact string it was built from (validation
/// parses it, but no normalized form is stored) so encodings round-trip
/// byte for byte.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ServiceEndpoint {
    url: String,
    id: Option<String>,
    service_type: Option<String>,
}

impl ServiceEndpoint {
    pub fn new(url: impl Into<String>) -> Result<Self, DocumentError> {
        Self::with_metadata(url, None, None)
    }

    pub fn with_metadata(
        url: impl Into<String>,
        id: Option<String>,
        service_type: Option<String>,
    ) -> Result<Self, DocumentError> {
        let url = url.into();
        if Url::parse(&url).is_err() {
            return Err(DocumentError::InvalidEndpointUrl(url));
        }
        Ok(ServiceEndpoint { url, id, service_type })
    }

    pub fn url(&self) -> &str {
        &self.url
    }

    pub fn id(&self) -> Option<&str> {
        self.id.as_deref()
    }

    pub fn service_type(&self) -> Option<&str> {
        self.service_type.as_deref()
    }

    /// The lossy projection used by the compact format.
    pub fn without_metadata(&self) -> ServiceEndpoint {
        ServiceEndpoint {
            url: self.url.clone(),
            id: None,
            service_type: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DidDocument {
    did: SwarmDid,
    verification_keys: Vec<PublicKeyEntry>,
    agreement_keys: Vec<PublicKeyEntry>,
    endpoints: Vec<ServiceEndpoint>,
}

impl DidDocument {
    pub fn new(
        did: SwarmDid,
        verification_keys: Vec<PublicKeyEntry>,
        agreement_keys: Vec<PublicKeyEntry>,
        endpoints: Vec<ServiceEndpoint>,
    ) -> Result<Self, DocumentError> {
        if verification_keys.is_empty() {
            return Err(DocumentError::NoVerificationKey);
        }
        if agreement_keys.is_empty() {
            return Err(DocumentError::NoAgreementKey);
        }
        if endpoints.is_empty() {
            return Err(DocumentError::NoEndpoint);
        }
        if verification_keys.iter().any(|k| k.role() != KeyRole::Verification)
            || agreement_keys.iter().any(|k| k.role() != KeyRole::Agreement)
        {
            return Err(DocumentError::RoleSectionMismatch);
        }
        // Key ids must be unique across both sections: they select keys in
        // envelope headers where no section information travels with them.
        let mut seen = HashSet::new();
        for key in verification_keys.iter().chain(&agreement_keys) {
            if !seen.insert(*key.key_id()) {
                return Err(DocumentError::DuplicateKeyId(key.key_id_base58()));
            }
        }
        let mut endpoint_ids = HashSet::new();
        for ep in &endpoints {
            if let Some(id) = ep.id() {
                if !endpoint_ids.insert(id.to_owned()) {
                    return Err(DocumentError::DuplicateEndpointId(id.to_owned()));
                }
            }
        }
        Ok(DidDocument {
            did,
            verification_keys,
            agreement_keys,
            endpoints,
        })
    }

    pub fn did(&self) -> &SwarmDid {
        &self.did
    }

    pub fn verification_keys(&self) -> &[PublicKeyEntry] {
        &self.verification_keys
    }

    pub fn agreement_keys(&self) -> &[PublicKeyEntry] {
        &self.agreement_keys
    }

    pub fn endpoints(&self) -> &[ServiceEndpoint] {
        &self.endpoints
    }

    /// Key used to check envelope signatures when no selector is present.
    pub fn primary_verification_key(&self) -> &PublicKeyEntry {
        &self.verification_keys[0]
    }

    /// Key used for static-static agreement.
    pub fn primary_agreement_key(&self) -> &PublicKeyEntry {
        &self.agreement_keys[0]
    }

    pub fn find_key(&self, key_id: &KeyId) -> Option<&PublicKeyEntry> {
        self.verification_keys
            .iter()
            .chain(&self.agreement_keys)
            .find(|k| k.key_id() == key_id)
    }

    /// What the document looks like after a pass through the compact
    /// format: identical except for dropped endpoint metadata.
    pub fn with_bare_endpoints(&self) -> DidDocument {
        DidDocument {
            did: self.did,
            verification_keys: self.verification_keys.clone(),
            agreement_keys: self.agreement_keys.clone(),
            endpoints: self.endpoints.iter().map(ServiceEndpoint::without_metadata).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IdentityError {
    #[error("no stored secret for key id {0}")]
    MissingSecret(String),
    #[error("stored secret for key id {0} does not match the document")]
    SecretMismatch(String),
    #[error("secret stored for a key id the document does not list: {0}")]
    OrphanSecret(String),
    #[error(transparent)]
    Document(#[from] DocumentError),
}

/// A document plus the private halves of every key it lists.
///
/// The secrets map is keyed by key id; roles come from the document. The
/// constructor proves every stored secret reproduces its published public
/// key, so a loaded identity that passes construction can actually sign
/// and agree as advertised.
#[derive(Clone)]
pub struct AgentIdentity {
    document: DidDocument,
    secrets: BTreeMap<KeyId, [u8; SECRET_KEY_LEN]>,
}

impl AgentIdentity {
    pub fn from_parts(
        document: DidDocument,
        secrets: BTreeMap<KeyId, [u8; SECRET_KEY_LEN]>,
    ) -> Result<Self, IdentityError> {
        for key in document
            .verification_keys()
            .iter()
            .chain(document.agreement_keys())
        {
            let secret = secrets
                .get(key.key_id())
                .ok_or_else(|| IdentityError::MissingSecret(key.key_id_base58()))?;
            if keys::public_from_secret(key.role(), secret) != *key.public_key() {
                return Err(IdentityError::SecretMismatch(key.key_id_base58()));
            }
        }
        if let Some(orphan) = secrets.keys().find(|kid| document.find_key(kid).is_none()) {
            return Err(IdentityError::OrphanSecret(
                bs58::encode(orphan).into_string(),
            ));
        }
        Ok(AgentIdentity { document, secrets })
    }

    /// Generates a complete fresh identity: new NSI, one Ed25519
    /// verification key, one X25519 agreement key, one bare endpoint.
    pub fn generate<R: CryptoRng + ?Sized>(
        endpoint_url: &str,
        rng: &mut R,
    ) -> Result<Self, DocumentError> {
        let did = SwarmDid::generate(rng);
        let (verify, verify_secret) = keys::generate_keypair(KeyRole::Verification, rng);
        let (agree, agree_secret) = keys::generate_keypair(KeyRole::Agreement, rng);
        let endpoint = ServiceEndpoint::new(endpoint_url)?;
        let document = DidDocument::new(did, vec![verify], vec![agree], vec![endpoint])?;
        let mut secrets = BTreeMap::new();
        secrets.insert(*verify.key_id(), verify_secret);
        secrets.insert(*agree.key_id(), agree_secret);
        Ok(AgentIdentity { document, secrets })
    }

    pub fn document(&self) -> &DidDocument {
        &self.document
    }

    pub fn did(&self) -> &SwarmDid {
        self.document.did()
    }

    pub fn secret(&self, key_id: &KeyId) -> Option<&[u8; SECRET_KEY_LEN]> {
        self.secrets.get(key_id)
    }

    pub fn secrets(&self) -> &BTreeMap<KeyId, [u8; SECRET_KEY_LEN]> {
        &self.secrets
    }

    pub fn primary_signing_secret(&self) -> &[u8; SECRET_KEY_LEN] {
        self.secrets
            .get(self.document.primary_verification_key().key_id())
            .expect("validated at construction")
    }

    pub fn primary_agreement_secret(&self) -> &[u8; SECRET_KEY_LEN] {
        self.secrets
            .get(self.document.primary_agreement_key().key_id())
            .expect("validated at construction")
    }
}

impl std::fmt::Debug for AgentIdentity {
    /// Secrets never appear in debug output or reports.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AgentIdentity")
            .field("did", &self.document.did().to_string())
            .field("keys", &self.secrets.len())
            .finish_non_exhaustive()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn rng() -> ChaCha20Rng {
        ChaCha20Rng::seed_from_u64(99)
    }

    #[test]
    fn generate_builds_a_publishable_identity() {
        let id = AgentIdentity::generate("https://example.org/agent", &mut rng()).unwrap();
        let doc = id.document();
        assert_eq!(doc.verification_keys().len(), 1);
        assert_eq!(doc.agreement_keys().len(), 1);
        assert_eq!(doc.endpoints().len(), 1);
        assert_eq!(doc.endpoints()[0].id(), None);
        assert_eq!(doc.endpoints()[0].service_type(), None);
        // Construction re-checks secret/public consistency.
        AgentIdentity::from_parts(doc.clone(), id.secrets().clone()).unwrap();
    }

    #[test]
    fn document_requires_all_three_sections() {
        let mut r = rng();
        let did = SwarmDid::generate(&mut r);
        let (vk, _) = keys::generate_keypair(KeyRole::Verification, &mut r);
        let (ak, _) = keys::generate_keypair(KeyRole::Agreement, &mut r);
        let ep = ServiceEndpoint::new("https://example.org/a").unwrap();

        assert_eq!(
            DidDocument::new(did, vec![], vec![ak], vec![ep.clone()]).unwrap_err(),
            DocumentError::NoVerificationKey
        );
        assert_eq!(
            DidDocument::new(did, vec![vk], vec![], vec![ep.clone()]).unwrap_err(),
            DocumentError::NoAgreementKey
        );
        assert_eq!(
            DidDocument::new(did, vec![vk], vec![ak], vec![]).unwrap_err(),
            DocumentError::NoEndpoint
        );
    }

    #[test]
    fn document_rejects_duplicate_key_ids() {
        let mut r = rng();
        let did = SwarmDid::generate(&mut r);
        let (vk, _) = keys::generate_keypair(KeyRole::Verification, &mut r);
        let (ak, _) = keys::generate_keypair(KeyRole::Agreement, &mut r);
        let ep = ServiceEndpoint::new("https://example.org/a").unwrap();
        assert!(matches!(
            DidDocument::new(did, vec![vk, vk], vec![ak], vec![ep]),
            Err(DocumentError::DuplicateKeyId(_))
        ));
    }

    #[test]
    fn document_rejects_keys_filed_under_the_wrong_section() {
        let mut r = rng();
        let did = SwarmDid::generate(&mut r);
        let (vk, _) = keys::generate_keypair(KeyRole::Verification, &mut r);
        let (ak, _) = keys::generate_keypair(KeyRole::Agreement, &mut r);
        let ep = ServiceEndpoint::new("https://example.org/a").unwrap();
        assert_eq!(
            DidDocument::new(did, vec![ak], vec![vk], vec![ep]).unwrap_err(),
            DocumentError::RoleSectionMismatch
        );
    }

    #[test]
    fn endpoints_must_be_absolute_urls_with_unique_ids() {
        assert!(matches!(
            ServiceEndpoint::new("not a url"),
            Err(DocumentError::InvalidEndpointUrl(_))
        ));
        assert!(matches!(
            ServiceEndpoint::new("/relative/path"),
            Err(DocumentError::InvalidEndpointUrl(_))
        ));

        let mut r = rng();
        let did = SwarmDid::generate(&mut r);
        let (vk, _) = keys::generate_keypair(KeyRole::Verification, &mut r);
        let (ak, _) = keys::generate_keypair(KeyRole::Agreement, &mut r);
        let ep = |id: &str| {
            ServiceEndpoint::with_metadata(
                "https://example.org/a",
                Some(id.to_owned()),
                None,
            )
            .unwrap()
        };
        assert!(matches!(
            DidDocument::new(did, vec![vk], vec![ak], vec![ep("#a"), ep("#a")]),
            Err(DocumentError::DuplicateEndpointId(_))
        ));
    }

    #[test]
    fn from_parts_rejects_broken_secret_material() {
        let id = AgentIdentity::generate("https://example.org/agent", &mut rng()).unwrap();

        let mut missing = id.secrets().clone();
        let some_kid = *missing.keys().next().unwrap();
        missing.remove(&some_kid);
        assert!(matches!(
            AgentIdentity::from_parts(id.document().clone(), missing),
            Err(IdentityError::MissingSecret(_))
        ));

        let mut tampered = id.secrets().clone();
        let kid = *id.document().primary_verification_key().key_id();
        tampered.get_mut(&kid).unwrap()[0] ^= 0xff;
        assert!(matches!(
            AgentIdentity::from_parts(id.document().clone(), tampered),
            Err(IdentityError::SecretMismatch(_))
        ));

        let mut orphan = id.secrets().clone();
        orphan.insert([9u8; 8], [1u8; 32]);
        assert!(matches!(
            AgentIdentity::from_parts(id.document().clone(), orphan),
            Err(IdentityError::OrphanSecret(_))
        ));
    }

    #[test]
    fn debug_output_never_contains_secret_bytes() {
        let id = AgentIdentity::generate("https://example.org/agent", &mut rng()).unwrap();
        let dbg = format!("{id:?}");
        for secret in id.secrets().values() {
            assert!(!dbg.contains(&hex::encode(secret)));
        }
    }
}
