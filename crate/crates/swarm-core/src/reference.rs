//! A pinned identity for benchmarks, examples and size tests.
//!
//! Size comparisons are only meaningful when the measured document is held
//! fixed, so the bench harness and the size tests share this one identity
//! instead of generating a fresh one per run. All of its key material is
//! compiled into the binary and therefore public: never use it for anything
//! but measurements and tests.
//!
//! The fixture is shaped like a typical constrained-device document: one
//! verification key, one agreement key, one endpoint that carries the
//! optional `id`/`type` metadata (so the verbose formats pay for it and the
//! compact format visibly drops it).

use crate::document::{AgentIdentity, DidDocument, ServiceEndpoint};
use crate::keys::{KeyRole, PublicKeyEntry, SECRET_KEY_LEN};
use crate::SwarmDid;
use std::collections::BTreeMap;

pub const REFERENCE_ENDPOINT: &str = "https://example.org/agent";
pub const REFERENCE_SERVICE_ID: &str = "#messaging";
pub const REFERENCE_SERVICE_TYPE: &str = "PeerMessaging";

const NSI: [u8; 16] = [
    0x7e, 0xa5, 0x6b, 0xa3, 0xc3, 0x6e, 0x19, 0x18, 0x1e, 0xda, 0x90, 0xc0, 0x35, 0xec, 0x18,
    0x30,
];

const ED25519_SECRET: [u8; SECRET_KEY_LEN] = [
    0x37, 0xc1, 0x5f, 0xb0, 0xd1, 0x86, 0x2d, 0xab, 0x95, 0xc9, 0x21, 0xcf, 0x10, 0x01, 0xf2,
    0xe3, 0xa5, 0xda, 0x3f, 0x06, 0xa9, 0x95, 0x07, 0xa8, 0x30, 0x01, 0x8d, 0x56, 0xc3, 0x36,
    0x22, 0x21,
];

// Stored pre-clamped, like every agreement secret in this crate.
const X25519_SECRET: [u8; SECRET_KEY_LEN] = [
    0x78, 0xbc, 0x97, 0xe4, 0x85, 0xdb, 0x7a, 0xcb, 0x37, 0x1c, 0x7d, 0xbc, 0x94, 0x63, 0x79,
    0x01, 0xd5, 0x39, 0x7c, 0xe4, 0x00, 0xc6, 0xad, 0x59, 0xc8, 0xbc, 0x03, 0x84, 0xd5, 0x0e,
    0x7f, 0x68,
];

/// The pinned identity. Construction re-validates the key material, so this
/// panics only if the fixture itself is corrupted.
pub fn reference_identity() -> AgentIdentity {
    let did = SwarmDid::new(NSI);
    let verify = PublicKeyEntry::new(
        KeyRole::Verification,
        crate::keys::public_from_secret(KeyRole::Verification, &ED25519_SECRET),
    );
    let agree = PublicKeyEntry::new(
        KeyRole::Agreement,
        crate::keys::public_from_secret(KeyRole::Agreement, &X25519_SECRET),
    );
    let endpoint = ServiceEndpoint::with_metadata(
        REFERENCE_ENDPOINT,
        Some(REFERENCE_SERVICE_ID.to_owned()),
        Some(REFERENCE_SERVICE_TYPE.to_owned()),
    )
    .expect("fixture endpoint is a valid URL");
    let mut secrets = BTreeMap::new();
    secrets.insert(*verify.key_id(), ED25519_SECRET);
    secrets.insert(*agree.key_id(), X25519_SECRET);
    let document = DidDocument::new(did, vec![verify], vec![agree], vec![endpoint])
        .expect("fixture document is well-formed");
    AgentIdentity::from_parts(document, secrets).expect("fixture secrets match their keys")
}

pub fn reference_document() -> DidDocument {
    reference_identity().document().clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::{encode, measure, WireFormat};

    #[test]
    fn fixture_identity_is_stable() {
        let id = reference_identity();
        assert_eq!(id.did().to_string(), "did:sw:Ge3xPb9vt74SMxnzvqNUrb");
        let doc = id.document();
        assert_eq!(doc.verification_keys()[0].key_id_base58(), "h1PVLs4cKWe");
        assert_eq!(doc.agreement_keys()[0].key_id_base58(), "KxUFmXautuR");
        assert_eq!(
            hex::encode(doc.verification_keys()[0].public_key()),
            "459715208fe81668483290f805e8a8581b261a6b20d52a9a8fb08c1a7d6f3348"
        );
        assert_eq!(
            hex::encode(doc.agreement_keys()[0].public_key()),
            "c599409ab3c1c9b570d2370d5de2dea317d30c5c6c7fcb26aabfb3bf1bb8c02c"
        );
    }

    #[test]
    fn fixture_sizes_are_frozen() {
        // These numbers are quoted in the README and the bench output; a
        // change here means an (intentional or not) wire format change.
        let sizes = measure(&reference_document());
        assert_eq!(sizes.json, 482);
        assert_eq!(sizes.cbor_direct, 438);
        assert_eq!(sizes.cbor_di, 131);
    }

    #[test]
    fn fixture_compact_bytes_are_frozen() {
        let bytes = encode(&reference_document(), WireFormat::CborDi);
        assert_eq!(
            hex::encode(&bytes),
            "845373773a7ea56ba3c36e19181eda90c035ec18308\
             1a301012006215820459715208fe81668483290f805e8a8581b261a6b20d52a\
             9a8fb08c1a7d6f334881a301012004215820c599409ab3c1c9b570d2370d5de\
             2dea317d30c5c6c7fcb26aabfb3bf1bb8c02c81781968747470733a2f2f6578\
             616d706c652e6f72672f6167656e74"
        );
    }

    #[test]
    fn fixture_json_spells_the_expected_vocabulary() {
        let id = reference_identity();
        let json = encode(id.document(), WireFormat::Json);
        let text = std::str::from_utf8(&json).unwrap();
        assert!(text.starts_with("{\"id\":\"did:sw:Ge3xPb9vt74SMxnzvqNUrb\""));
        let vk_b58 = bs58::encode(id.document().verification_keys()[0].public_key()).into_string();
        assert!(text.contains(&format!(
            "{{\"id\":\"did:sw:Ge3xPb9vt74SMxnzvqNUrb#h1PVLs4cKWe\",\
             \"type\":\"Ed25519VerificationKey2019\",\
             \"publicKeyBase58\":\"{vk_b58}\"}}"
        )));
        assert!(text.contains(
            "{\"id\":\"#messaging\",\"type\":\"PeerMessaging\",\
             \"serviceEndpoint\":\"https://example.org/agent\"}"
        ));
    }
}
