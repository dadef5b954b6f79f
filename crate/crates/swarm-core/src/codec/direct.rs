//! Mechanical CBOR image of the JSON document.
//!
//! Same member names, same text values, same Base58 key strings; only the
//! framing changes from JSON punctuation to CBOR heads. Maps are emitted in
//! canonical key order and the decoder enforces it, so this format is as
//! deterministic as the other two.

use super::{CodecError, RawDoc, RawKey, RawService};
use crate::cbor::Value;
use crate::document::DidDocument;

pub(super) fn encode(doc: &DidDocument) -> Vec<u8> {
    let raw = RawDoc::from_document(doc);
    let key_value = |k: RawKey| {
        Value::Map(vec![
            (Value::Text("id".into()), Value::Text(k.id)),
            (Value::Text("type".into()), Value::Text(k.method_type)),
            (
                Value::Text("publicKeyBase58".into()),
                Value::Text(k.public_key_base58),
            ),
        ])
    };
    let service_value = |s: RawService| {
        let mut entries = Vec::new();
        if let Some(id) = s.id {
            entries.push((Value::Text("id".into()), Value::Text(id)));
        }
        if let Some(t) = s.service_type {
            entries.push((Value::Text("type".into()), Value::Text(t)));
        }
        entries.push((
            Value::Text("serviceEndpoint".into()),
            Value::Text(s.service_endpoint),
        ));
        Value::Map(entries)
    };
    Value::Map(vec![
        (Value::Text("id".into()), Value::Text(raw.id)),
        (
            Value::Text("verificationMethod".into()),
            Value::Array(raw.verification_method.into_iter().map(key_value).collect()),
        ),
        (
            Value::Text("keyAgreement".into()),
            Value::Array(raw.key_agreement.into_iter().map(key_value).collect()),
        ),
        (
            Value::Text("service".into()),
            Value::Array(raw.service.into_iter().map(service_value).collect()),
        ),
    ])
    .to_bytes()
}

pub(super) fn decode(bytes: &[u8]) -> Result<DidDocument, CodecError> {
    let value = Value::from_bytes(bytes)?;
    let entries = as_map(&value)?;

    let mut id = None;
    let mut verification_method = None;
    let mut key_agreement = None;
    let mut service = None;
    for (key, val) in entries {
        match text(key)? {
            "id" => id = Some(text(val)?.to_owned()),
            "verificationMethod" => verification_method = Some(keys_in(val)?),
            "keyAgreement" => key_agreement = Some(keys_in(val)?),
            "service" => service = Some(services_in(val)?),
            _ => return Err(CodecError::Malformed("unexpected document member")),
        }
    }
    RawDoc {
        id: id.ok_or(CodecError::Malformed("missing id"))?,
        verification_method: verification_method
            .ok_or(CodecError::Malformed("missing verificationMethod"))?,
        key_agreement: key_agreement.ok_or(CodecError::Malformed("missing keyAgreement"))?,
        service: service.ok_or(CodecError::Malformed("missing service"))?,
    }
    .into_document()
}

fn keys_in(value: &Value) -> Result<Vec<RawKey>, CodecError> {
    as_array(value)?
        .iter()
        .map(|item| {
            let mut id = None;
            let mut method_type = None;
            let mut public_key_base58 = None;
            for (key, val) in as_map(item)? {
                match text(key)? {
                    "id" => id = Some(text(val)?.to_owned()),
                    "type" => method_type = Some(text(val)?.to_owned()),
                    "publicKeyBase58" => public_key_base58 = Some(text(val)?.to_owned()),
                    _ => return Err(CodecError::Malformed("unexpected key member")),
                }
            }
            Ok(RawKey {
                id: id.ok_or(CodecError::Malformed("key missing id"))?,
                method_type: method_type.ok_or(CodecError::Malformed("key missing type"))?,
                public_key_base58: public_key_base58
                    .ok_or(CodecError::Malformed("key missing publicKeyBase58"))?,
            })
        })
        .collect()
}

fn services_in(value: &Value) -> Result<Vec<RawService>, CodecError> {
    as_array(value)?
        .iter()
        .map(|item| {
            let mut id = None;
            let mut service_type = None;
            let mut service_endpoint = None;
            for (key, val) in as_map(item)? {
                match text(key)? {
                    "id" => id = Some(text(val)?.to_owned()),
                    "type" => service_type = Some(text(val)?.to_owned()),
                    "serviceEndpoint" => service_endpoint = Some(text(val)?.to_owned()),
                    _ => return Err(CodecError::Malformed("unexpected service member")),
                }
            }
            Ok(RawService {
                id,
                service_type,
                service_endpoint: service_endpoint
                    .ok_or(CodecError::Malformed("service missing serviceEndpoint"))?,
            })
        })
        .collect()
}

fn as_map(value: &Value) -> Result<&[(Value, Value)], CodecError> {
    value
        .as_map()
        .ok_or(CodecError::Malformed("expected a map"))
}

fn as_array(value: &Value) -> Result<&[Value], CodecError> {
    value
        .as_array()
        .ok_or(CodecError::Malformed("expected an array"))
}

fn text(value: &Value) -> Result<&str, CodecError> {
    value
        .as_text()
        .ok_or(CodecError::Malformed("expected a text string"))
}
