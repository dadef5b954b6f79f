//! On-disk agent state.
//!
//! One directory per agent:
//!
//! ```text
//! <root>/identity.cbordi   own document, compact format
//! <root>/secrets.cbor      key id -> secret key, canonical CBOR map
//! <root>/peers/<id>.cbordi cached peer documents, named by Base58 NSI
//! ```
//!
//! Every write goes through a same-directory temp file and an atomic
//! rename, so a crash leaves either the old state or the new one, never a
//! half-written file. Loading runs the full identity validation, which
//! means a store that loads is a store that can sign and decrypt.

use crate::cbor::{DecodeError, Value};
use crate::codec::{self, CodecError, WireFormat};
use crate::did::SwarmDid;
use crate::document::{AgentIdentity, DidDocument, IdentityError};
use crate::keys::{KeyId, SECRET_KEY_LEN};
use std::collections::BTreeMap;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

const IDENTITY_FILE: &str = "identity.cbordi";
const SECRETS_FILE: &str = "secrets.cbor";
const PEERS_DIR: &str = "peers";

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error("no agent identity under {0:?}; create one first")]
    NotInitialized(PathBuf),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("stored document is invalid: {0}")]
    Codec(#[from] CodecError),
    #[error("stored secrets are invalid: {0}")]
    Cbor(#[from] DecodeError),
    #[error("malformed store: {0}")]
    Malformed(&'static str),
    #[error(transparent)]
    Identity(#[from] IdentityError),
}

pub struct AgentStore {
    root: PathBuf,
}

impl AgentStore {
    pub fn at(root: impl Into<PathBuf>) -> AgentStore {
        AgentStore { root: root.into() }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn is_initialized(&self) -> bool {
        self.root.join(IDENTITY_FILE).exists() && self.root.join(SECRETS_FILE).exists()
    }

    pub fn save_identity(&self, identity: &AgentIdentity) -> Result<(), StoreError> {
        let doc = identity.document();
        if *doc != doc.with_bare_endpoints() {
            // The storage format cannot carry endpoint metadata; refusing
            // beats silently returning a different identity on reload.
            return Err(StoreError::Malformed(
                "identity endpoint metadata does not survive compact storage",
            ));
        }
        std::fs::create_dir_all(&self.root)?;
        write_atomic(
            &self.root,
            &self.root.join(IDENTITY_FILE),
            &codec::encode(doc, WireFormat::CborDi),
        )?;
        let secrets = Value::Map(
            identity
                .secrets()
                .iter()
                .map(|(kid, secret)| (Value::Bytes(kid.to_vec()), Value::Bytes(secret.to_vec())))
                .collect(),
        );
        write_atomic(&self.root, &self.root.join(SECRETS_FILE), &secrets.to_bytes())?;
        Ok(())
    }

    pub fn load_identity(&self) -> Result<AgentIdentity, StoreError> {
        if !self.is_initialized() {
            return Err(StoreError::NotInitialized(self.root.clone()));
        }
        let doc_bytes = std::fs::read(self.root.join(IDENTITY_FILE))?;
        let document = codec::decode(&doc_bytes, WireFormat::CborDi)?;

        let secret_bytes = std::fs::read(self.root.join(SECRETS_FILE))?;
        let value = Value::from_bytes(&secret_bytes)?;
        let entries = value
            .as_map()
            .ok_or(StoreError::Malformed("secrets file must be a map"))?;
        let mut secrets = BTreeMap::new();
        for (key, val) in entries {
            let kid: KeyId = key
                .as_bytes()
                .and_then(|b| b.try_into().ok())
                .ok_or(StoreError::Malformed("secret key ids must be 8 bytes"))?;
            let secret: [u8; SECRET_KEY_LEN] = val
                .as_bytes()
                .and_then(|b| b.try_into().ok())
                .ok_or(StoreError::Malformed("secrets must be 32 bytes"))?;
            secrets.insert(kid, secret);
        }
        Ok(AgentIdentity::from_parts(document, secrets)?)
    }

    pub fn cache_peer(&self, doc: &DidDocument) -> Result<(), StoreError> {
        let dir = self.root.join(PEERS_DIR);
        std::fs::create_dir_all(&dir)?;
        write_atomic(
            &dir,
            &self.peer_path(doc.did()),
            &codec::encode(doc, WireFormat::CborDi),
        )?;
        Ok(())
    }

    pub fn cached_peer(&self, did: &SwarmDid) -> Result<Option<DidDocument>, StoreError> {
        let path = self.peer_path(did);
        let bytes = match std::fs::read(&path) {
            Ok(bytes) => bytes,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let doc = codec::decode(&bytes, WireFormat::CborDi)?;
        if doc.did() != did {
            return Err(StoreError::Malformed(
                "cached peer file names a different DID",
            ));
        }
        Ok(Some(doc))
    }

    fn peer_path(&self, did: &SwarmDid) -> PathBuf {
        let name = bs58::encode(did.nsi()).into_string();
        self.root.join(PEERS_DIR).join(format!("{name}.cbordi"))
    }
}

/// Write-to-temp-then-rename within the target directory. The temp file is
/// created readable by the owner only, which is what the secrets file
/// needs, and the rename preserves it.
fn write_atomic(dir: &Path, path: &Path, bytes: &[u8]) -> io::Result<()> {
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_data()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
