//! DDo wire formats.
//!
//! Every document can travel in three shapes:
//!
//! * [`WireFormat::Json`]: DID-Core vocabulary, minified. Keys are Base58
//!   text, key ids ride in the `#fragment` of each method id.
//! * [`WireFormat::CborDirect`]: the mechanical CBOR image of the JSON
//!   document: same member names as text keys, same Base58 strings as text
//!   values. Saves only the punctuation, which is the point: it is the
//!   honest "just re-encode it" baseline.
//! * [`WireFormat::CborDi`]: the compact form. One four-element array:
//!   19-byte binary DID, verification keys, agreement keys, endpoint URLs.
//!   Keys are COSE_Key maps with integer labels and raw byte values; key
//!   ids are not carried at all since any reader can re-derive them from
//!   the key bytes. Endpoint metadata (`id`/`type`) is dropped; that is
//!   the documented lossy direction of this format.
//!
//! All three encoders are deterministic: identical documents produce
//! identical bytes, which is what makes byte-size comparisons meaningful.
//! For any valid document the sizes order as
//! `cbor-di < cbor < json`.

mod compact;
mod direct;
mod json;

use crate::cbor;
use crate::did::DidError;
use crate::document::{DidDocument, DocumentError};
use crate::keys::KeyError;
use std::fmt;
use std::str::FromStr;

pub const ED25519_VERIFICATION_TYPE: &str = "Ed25519VerificationKey2019";
pub const X25519_AGREEMENT_TYPE: &str = "X25519KeyAgreementKey2019";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WireFormat {
    Json,
    CborDirect,
    CborDi,
}

impl WireFormat {
    pub const ALL: [WireFormat; 3] = [WireFormat::Json, WireFormat::CborDirect, WireFormat::CborDi];

    /// Token used in CLI flags, query strings and CSV columns.
    pub fn token(self) -> &'static str {
        match self {
            WireFormat::Json => "json",
            WireFormat::CborDirect => "cbor",
            WireFormat::CborDi => "cbor-di",
        }
    }

    /// Media type for HTTP responses carrying this format.
    pub fn media_type(self) -> &'static str {
        match self {
            WireFormat::Json => "application/did+json",
            WireFormat::CborDirect | WireFormat::CborDi => "application/cbor",
        }
    }
}

impl fmt::Display for WireFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for WireFormat {
    type Err = UnknownFormat;

    fn from_str(s: &str) -> Result<Self, UnknownFormat> {
        match s {
            "json" => Ok(WireFormat::Json),
            "cbor" => Ok(WireFormat::CborDirect),
            "cbor-di" => Ok(WireFormat::CborDi),
            other => Err(UnknownFormat(other.to_owned())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown format {0:?}; expected json, cbor or cbor-di")]
pub struct UnknownFormat(pub String);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CodecError {
    #[error("document is not valid JSON: {0}")]
    Json(String),
    #[error("document is not valid CBOR: {0}")]
    Cbor(#[from] cbor::DecodeError),
    #[error("malformed document: {0}")]
    Malformed(&'static str),
    #[error("key type label {0} is not OKP")]
    UnsupportedKeyType(i64),
    #[error("unsupported curve label {0}")]
    UnsupportedCurve(i64),
    #[error("key curve does not belong in this section")]
    CurveSectionMismatch,
    #[error("verification method type {0:?} is not supported")]
    UnsupportedMethodType(String),
    #[error("method id {0:?} does not belong to this document")]
    ForeignMethodId(String),
    #[error("public key is not valid Base58")]
    BadKeyBase58,
    #[error(transparent)]
    Did(#[from] DidError),
    #[error(transparent)]
    Key(#[from] KeyError),
    #[error(transparent)]
    Document(#[from] DocumentError),
}

/// Serializes `doc` in the requested format.
pub fn encode(doc: &DidDocument, format: WireFormat) -> Vec<u8> {
    match format {
        WireFormat::Json => json::encode(doc),
        WireFormat::CborDirect => direct::encode(doc),
        WireFormat::CborDi => compact::encode(doc),
    }
}

/// Parses and fully validates a document: round-tripped key ids must match
/// their derivation, curves must sit in the right sections, URLs must be
/// absolute, and the assembled document must satisfy every `DidDocument`
/// construction rule.
pub fn decode(bytes: &[u8], format: WireFormat) -> Result<DidDocument, CodecError> {
    match format {
        WireFormat::Json => json::decode(bytes),
        WireFormat::CborDirect => direct::decode(bytes),
        WireFormat::CborDi => compact::decode(bytes),
    }
}

/// Re-serializes a document from one format to another. Converting *to*
/// `cbor-di` drops endpoint metadata; every other direction is lossless.
pub fn convert(bytes: &[u8], from: WireFormat, to: WireFormat) -> Result<Vec<u8>, CodecError> {
    Ok(encode(&decode(bytes, from)?, to))
}

/// Byte sizes of one document across all formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SizeBreakdown {
    pub json: usize,
    pub cbor_direct: usize,
    pub cbor_di: usize,
}

impl SizeBreakdown {
    pub fn get(&self, format: WireFormat) -> usize {
        match format {
            WireFormat::Json => self.json,
            WireFormat::CborDirect => self.cbor_direct,
            WireFormat::CborDi => self.cbor_di,
        }
    }
}

pub fn measure(doc: &DidDocument) -> SizeBreakdown {
    SizeBreakdown {
        json: encode(doc, WireFormat::Json).len(),
        cbor_direct: encode(doc, WireFormat::CborDirect).len(),
        cbor_di: encode(doc, WireFormat::CborDi).len(),
    }
}

/// Shared pre-validation image of a document: what the verbose formats
/// spell out, before semantic checks. Both the JSON and direct-CBOR codecs
/// reduce to this, which is what keeps them mechanically equivalent.
struct RawDoc {
    id: String,
    verification_method: Vec<RawKey>,
    key_agreement: Vec<RawKey>,
    service: Vec<RawService>,
}

struct RawKey {
    id: String,
    method_type: String,
    public_key_base58: String,
}

struct RawService {
    id: Option<String>,
    service_type: Option<String>,
    service_endpoint: String,
}

use crate::document::ServiceEndpoint;
use crate::keys::{KeyRole, PublicKeyEntry};
use crate::SwarmDid;

impl RawDoc {
    fn from_document(doc: &DidDocument) -> RawDoc {
        let did = doc.did().to_string();
        let raw_key = |key: &PublicKeyEntry| RawKey {
            id: format!("{did}#{}", key.key_id_base58()),
            method_type: match key.role() {
                KeyRole::Verification => ED25519_VERIFICATION_TYPE.to_owned(),
                KeyRole::Agreement => X25519_AGREEMENT_TYPE.to_owned(),
            },
            public_key_base58: bs58::encode(key.public_key()).into_string(),
        };
        let verification_method = doc.verification_keys().iter().map(raw_key).collect();
        let key_agreement = doc.agreement_keys().iter().map(raw_key).collect();
        RawDoc {
            id: did,
            verification_method,
            key_agreement,
            service: doc
                .endpoints()
                .iter()
                .map(|ep| RawService {
                    id: ep.id().map(str::to_owned),
                    service_type: ep.service_type().map(str::to_owned),
                    service_endpoint: ep.url().to_owned(),
                })
                .collect(),
        }
    }

    fn into_document(self) -> Result<DidDocument, CodecError> {
        let did: SwarmDid = self.id.parse()?;
        let parse_key = |raw: &RawKey, role: KeyRole| -> Result<PublicKeyEntry, CodecError> {
            let expected_type = match role {
                KeyRole::Verification => ED25519_VERIFICATION_TYPE,
                KeyRole::Agreement => X25519_AGREEMENT_TYPE,
            };
            if raw.method_type != expected_type {
                return Err(CodecError::UnsupportedMethodType(raw.method_type.clone()));
            }
            let pk = bs58::decode(&raw.public_key_base58)
                .into_vec()
                .map_err(|_| CodecError::BadKeyBase58)?;
            let entry = PublicKeyEntry::from_wire(role, &pk, None)?;
            // The fragment carries the key id; it must equal the derived id
            // and the base must be this document's DID.
            let expected_id = format!("{}#{}", self.id, entry.key_id_base58());
            if raw.id != expected_id {
                return match raw.id.split_once('#') {
                    Some((base, _)) if base == self.id => Err(KeyError::KeyIdMismatch.into()),
                    _ => Err(CodecError::ForeignMethodId(raw.id.clone())),
                };
            }
            Ok(entry)
        };

        let verification_keys = self
            .verification_method
            .iter()
            .map(|k| parse_key(k, KeyRole::Verification))
            .collect::<Result<Vec<_>, _>>()?;
        let agreement_keys = self
            .key_agreement
            .iter()
            .map(|k| parse_key(k, KeyRole::Agreement))
            .collect::<Result<Vec<_>, _>>()?;
        let endpoints = self
            .service
            .into_iter()
            .map(|svc| ServiceEndpoint::with_metadata(svc.service_endpoint, svc.id, svc.service_type))
            .collect::<Result<Vec<_>, _>>()?;

        Ok(DidDocument::new(did, verification_keys, agreement_keys, endpoints)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::document::AgentIdentity;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn doc() -> DidDocument {
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        AgentIdentity::generate("https://example.org/sensor-7", &mut rng)
            .unwrap()
            .document()
            .clone()
    }

    #[test]
    fn format_tokens_roundtrip() {
        for fmt in WireFormat::ALL {
            assert_eq!(fmt.token().parse::<WireFormat>().unwrap(), fmt);
        }
        assert!("JSON".parse::<WireFormat>().is_err());
        assert!("cbor_di".parse::<WireFormat>().is_err());
    }

    #[test]
    fn every_format_roundtrips_a_fresh_document() {
        let doc = doc();
        for fmt in WireFormat::ALL {
            let bytes = encode(&doc, fmt);
            let back = decode(&bytes, fmt).unwrap();
            assert_eq!(back, doc, "format {fmt}");
        }
    }

    #[test]
    fn encoding_is_deterministic() {
        let doc = doc();
        for fmt in WireFormat::ALL {
            assert_eq!(encode(&doc, fmt), encode(&doc, fmt));
            let reparsed = decode(&encode(&doc, fmt), fmt).unwrap();
            assert_eq!(encode(&reparsed, fmt), encode(&doc, fmt));
        }
    }

    #[test]
    fn sizes_order_compact_first() {
        let sizes = measure(&doc());
        assert!(sizes.cbor_di < sizes.cbor_direct);
        assert!(sizes.cbor_direct < sizes.json);
    }

    #[test]
    fn convert_is_encode_after_decode() {
        let doc = doc();
        let json = encode(&doc, WireFormat::Json);
        let di = convert(&json, WireFormat::Json, WireFormat::CborDi).unwrap();
        assert_eq!(di, encode(&doc, WireFormat::CborDi));
        // Back out of the compact form: equal modulo endpoint metadata
        // (none on a fresh document, so fully equal here).
        let back = convert(&di, WireFormat::CborDi, WireFormat::Json).unwrap();
        assert_eq!(decode(&back, WireFormat::Json).unwrap(), doc);
    }

    #[test]
    fn conversion_to_compact_drops_endpoint_metadata_only() {
        let base = doc();
        let decorated = DidDocument::new(
            *base.did(),
            base.verification_keys().to_vec(),
            base.agreement_keys().to_vec(),
            vec![ServiceEndpoint::with_metadata(
                "https://example.org/sensor-7",
                Some("#messaging".into()),
                Some("PeerMessaging".into()),
            )
            .unwrap()],
        )
        .unwrap();
        let di = encode(&decorated, WireFormat::CborDi);
        let back = decode(&di, WireFormat::CborDi).unwrap();
        assert_eq!(back, decorated.with_bare_endpoints());
        assert_ne!(back, decorated);
    }
}
