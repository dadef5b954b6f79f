//! DID-Core JSON serialization, minified.

use super::{CodecError, RawDoc, RawKey, RawService};
use crate::document::DidDocument;
use serde::{Deserialize, Serialize};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonDoc {
    id: String,
    #[serde(rename = "verificationMethod")]
    verification_method: Vec<JsonKey>,
    #[serde(rename = "keyAgreement")]
    key_agreement: Vec<JsonKey>,
    service: Vec<JsonService>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonKey {
    id: String,
    #[serde(rename = "type")]
    method_type: String,
    #[serde(rename = "publicKeyBase58")]
    public_key_base58: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonService {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    id: Option<String>,
    #[serde(rename = "type", default, skip_serializing_if = "Option::is_none")]
    service_type: Option<String>,
    #[serde(rename = "serviceEndpoint")]
    service_endpoint: String,
}

pub(super) fn encode(doc: &DidDocument) -> Vec<u8> {
    let raw = RawDoc::from_document(doc);
    let image = JsonDoc {
        id: raw.id,
        verification_method: raw.verification_method.into_iter().map(key_out).collect(),
        key_agreement: raw.key_agreement.into_iter().map(key_out).collect(),
        service: raw
            .service
            .into_iter()
            .map(|s| JsonService {
                id: s.id,
                service_type: s.service_type,
                service_endpoint: s.service_endpoint,
            })
            .collect(),
    };
    serde_json::to_vec(&image).expect("string-only struct always serializes")
}

pub(super) fn decode(bytes: &[u8]) -> Result<DidDocument, CodecError> {
    let image: JsonDoc =
        serde_json::from_slice(bytes).map_err(|e| CodecError::Json(e.to_string()))?;
    RawDoc {
        id: image.id,
        verification_method: image.verification_method.into_iter().map(key_in).collect(),
        key_agreement: image.key_agreement.into_iter().map(key_in).collect(),
        service: image
            .service
            .into_iter()
            .map(|s| RawService {
                id: s.id,
                service_type: s.service_type,
                service_endpoint: s.service_endpoint,
            })
            .collect(),
    }
    .into_document()
}

fn key_out(k: RawKey) -> JsonKey {
    JsonKey {
        id: k.id,
        method_type: k.method_type,
        public_key_base58: k.public_key_base58,
    }
}

fn key_in(k: JsonKey) -> RawKey {
    RawKey {
        id: k.id,
        method_type: k.method_type,
        public_key_base58: k.public_key_base58,
    }
}
