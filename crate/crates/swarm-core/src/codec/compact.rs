//! Compact binary document format.
//!
//! Layout, one canonical CBOR array:
//!
//! ```text
//! [
//!   h'73773a' || nsi          ; 19-byte binary DID
//!   [ COSE_Key, ... ]         ; verification keys (Ed25519)
//!   [ COSE_Key, ... ]         ; agreement keys (X25519)
//!   [ tstr, ... ]             ; endpoint URLs
//! ]
//! ```
//!
//! Each COSE_Key is `{1: 1, -1: crv, -2: x}` (OKP, curve label, raw public
//! key). Key ids are never written: they are a hash prefix of `x`, so the
//! reader derives them. A `2: kid` label is tolerated on input and checked
//! against the derivation. Section position encodes key purpose, which is
//! why a curve in the wrong section is an error and not a soft mismatch.

use super::CodecError;
use crate::cbor::Value;
use crate::document::{DidDocument, ServiceEndpoint};
use crate::keys::{Curve, KeyRole, PublicKeyEntry};
use crate::SwarmDid;

const LABEL_KTY: i64 = 1;
const LABEL_KID: i64 = 2;
const LABEL_CRV: i64 = -1;
const LABEL_X: i64 = -2;
const KTY_OKP: i64 = 1;

pub(super) fn encode(doc: &DidDocument) -> Vec<u8> {
    let cose_key = |key: &PublicKeyEntry| {
        Value::Map(vec![
            (Value::int(LABEL_KTY), Value::int(KTY_OKP)),
            (Value::int(LABEL_CRV), Value::int(key.curve().cose_label())),
            (Value::int(LABEL_X), Value::Bytes(key.public_key().to_vec())),
        ])
    };
    Value::Array(vec![
        Value::Bytes(doc.did().to_binary().to_vec()),
        Value::Array(doc.verification_keys().iter().map(cose_key).collect()),
        Value::Array(doc.agreement_keys().iter().map(cose_key).collect()),
        Value::Array(
            doc.endpoints()
                .iter()
                .map(|ep| Value::Text(ep.url().to_owned()))
                .collect(),
        ),
    ])
    .to_bytes()
}

pub(super) fn decode(bytes: &[u8]) -> Result<DidDocument, CodecError> {
    let value = Value::from_bytes(bytes)?;
    let top = value
        .as_array()
        .ok_or(CodecError::Malformed("expected an array"))?;
    let [did, verification, agreement, endpoints] = top else {
        return Err(CodecError::Malformed("document must have 4 sections"));
    };

    let did = SwarmDid::from_binary(
        did.as_bytes()
            .ok_or(CodecError::Malformed("DID must be a byte string"))?,
    )?;
    let verification_keys = keys_in(verification, KeyRole::Verification)?;
    let agreement_keys = keys_in(agreement, KeyRole::Agreement)?;
    let endpoints = endpoints
        .as_array()
        .ok_or(CodecError::Malformed("expected an array"))?
        .iter()
        .map(|v| {
            let url = v
                .as_text()
                .ok_or(CodecError::Malformed("endpoint must be a text string"))?;
            Ok(ServiceEndpoint::new(url)?)
        })
        .collect::<Result<Vec<_>, CodecError>>()?;

    Ok(DidDocument::new(did, verification_keys, agreement_keys, endpoints)?)
}

fn keys_in(section: &Value, role: KeyRole) -> Result<Vec<PublicKeyEntry>, CodecError> {
    section
        .as_array()
        .ok_or(CodecError::Malformed("expected an array"))?
        .iter()
        .map(|item| key_in(item, role))
        .collect()
}

fn key_in(item: &Value, role: KeyRole) -> Result<PublicKeyEntry, CodecError> {
    let entries = item
        .as_map()
        .ok_or(CodecError::Malformed("COSE key must be a map"))?;
    let mut kty = None;
    let mut crv = None;
    let mut x = None;
    let mut kid = None;
    for (label, value) in entries {
        match label
            .as_int()
            .ok_or(CodecError::Malformed("COSE key labels must be integers"))?
        {
            LABEL_KTY => {
                kty = Some(
                    value
                        .as_int()
                        .ok_or(CodecError::Malformed("kty must be an integer"))?,
                )
            }
            LABEL_CRV => {
                crv = Some(
                    value
                        .as_int()
                        .ok_or(CodecError::Malformed("crv must be an integer"))?,
                )
            }
            LABEL_X => {
                x = Some(
                    value
                        .as_bytes()
                        .ok_or(CodecError::Malformed("x must be a byte string"))?,
                )
            }
            LABEL_KID => {
                kid = Some(
                    value
                        .as_bytes()
                        .ok_or(CodecError::Malformed("kid must be a byte string"))?,
                )
            }
            _ => return Err(CodecError::Malformed("unexpected COSE key label")),
        }
    }
    let kty = kty.ok_or(CodecError::Malformed("COSE key missing kty"))?;
    if kty != KTY_OKP {
        return Err(CodecError::UnsupportedKeyType(kty));
    }
    let crv = crv.ok_or(CodecError::Malformed("COSE key missing crv"))?;
    let curve = Curve::from_cose_label(crv).ok_or(CodecError::UnsupportedCurve(crv))?;
    if curve.role() != role {
        return Err(CodecError::CurveSectionMismatch);
    }
    let x = x.ok_or(CodecError::Malformed("COSE key missing x"))?;
    Ok(PublicKeyEntry::from_wire(role, x, kid)?)
}
