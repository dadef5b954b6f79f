//! JSON-based messaging baseline.
//!
//! The comparison partner for the compact envelopes: the same messages,
//! carried the way a JOSE/DIDComm stack carries them. Every message is a
//! JWM (a typed JSON wrapper with `@type`, `@id`, `from`, optional `to`
//! and a `body`), then signed as a general-serialization JWS and/or
//! encrypted as a general-serialization JWE.
//!
//! The cryptography is deliberately identical to the compact stack: Ed25519
//! signatures, X25519 static-static agreement, the same HKDF context, the
//! same AES-CCM-16-64-128 content encryption. What differs is purely the
//! carrier: JSON member names, Base64url transport encoding, and textual
//! algorithm/key identifiers. Byte-count differences between the two stacks
//! therefore measure envelope format cost and nothing else.
//!
//! Body embedding: a payload that already is a JSON object or array (and
//! survives re-extraction byte for byte) rides embedded as raw JSON, which
//! is how a native JSON message avoids double encoding. Anything else,
//! CBOR included, is Base64url-wrapped in a JSON string. The size penalty
//! this creates for binary payloads is a real property of JSON transports
//! and intentionally not papered over.

use crate::did::{DidError, SwarmDid};
use crate::diotcomm::{
    derive_cek, shared_secret, Aes128Ccm, OpenedMessage, Resolver, AEAD_TAG_LEN, MAX_PLAINTEXT,
    NONCE_LEN,
};
use crate::document::{AgentIdentity, DidDocument};
use crate::keys::{KeyId, KeyRole, PublicKeyEntry, KEY_ID_LEN};
use base64::engine::general_purpose::URL_SAFE_NO_PAD as B64;
use base64::Engine;
use ccm::aead::{Aead, KeyInit, Payload};
use ed25519_dalek::{Signature, Signer, SigningKey, VerifyingKey};
use rand::CryptoRng;
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;
use sha2::{Digest, Sha256};
use uuid::Uuid;

pub const MESSAGE_TYPE: &str = "https://didcomm.org/basicmessage/1.0/message";
const TYP: &str = "JWM/1.0";
const ALG_SIGN: &str = "EdDSA";
const ALG_KEY_AGREEMENT: &str = "ECDH-SS";
const ENC_CONTENT: &str = "A128CCM";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BaselineError {
    #[error("message is not valid JSON: {0}")]
    Json(String),
    #[error("malformed message: {0}")]
    Malformed(&'static str),
    #[error("unsupported algorithm {0:?}")]
    UnsupportedAlgorithm(String),
    #[error("cannot resolve sender {0}")]
    UnknownSender(SwarmDid),
    #[error("sender lists no key matching the kid")]
    UnknownKey,
    #[error("signature check failed")]
    BadSignature,
    #[error("decryption failed")]
    AeadFailure,
    #[error("message layers name different senders")]
    SenderMismatch,
    #[error("peer agreement key produces a degenerate shared secret")]
    WeakSharedSecret,
    #[error("payload exceeds the AEAD size limit")]
    PayloadTooLarge,
    #[error(transparent)]
    Did(#[from] DidError),
}

fn json_err(e: serde_json::Error) -> BaselineError {
    BaselineError::Json(e.to_string())
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Jwm {
    #[serde(rename = "@type")]
    message_type: String,
    #[serde(rename = "@id")]
    id: String,
    from: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    to: Option<Vec<String>>,
    body: Box<RawValue>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JwsJson {
    payload: String,
    signatures: Vec<JwsSignature>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JwsSignature {
    protected: String,
    signature: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JwsProtected {
    alg: String,
    typ: String,
    kid: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JweJson {
    protected: String,
    iv: String,
    ciphertext: String,
    tag: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JweProtected {
    alg: String,
    enc: String,
    typ: String,
    kid: String,
}

/// Signs `payload` as a JWM-in-JWS. No RNG is involved: the message id is
/// derived from the sender and payload, mirroring the RNG-free compact
/// [`crate::diotcomm::sign`].
pub fn sign(sender: &AgentIdentity, payload: &[u8]) -> Vec<u8> {
    let jwm = build_jwm(sender.did(), None, payload, derived_id(sender.did(), payload));
    sign_blob(sender, &jwm)
}

/// Encrypts `payload` as a JWM-in-JWE addressed to `receiver`.
pub fn encrypt<R: CryptoRng + ?Sized>(
    sender: &AgentIdentity,
    receiver: &DidDocument,
    payload: &[u8],
    rng: &mut R,
) -> Result<Vec<u8>, BaselineError> {
    let jwm = build_jwm(sender.did(), Some(receiver.did()), payload, random_id(rng));
    encrypt_blob(sender, receiver, &jwm, rng)
}

/// Signs, then encrypts the complete JWS.
pub fn sign_encrypt<R: CryptoRng + ?Sized>(
    sender: &AgentIdentity,
    receiver: &DidDocument,
    payload: &[u8],
    rng: &mut R,
) -> Result<Vec<u8>, BaselineError> {
    let jwm = build_jwm(sender.did(), Some(receiver.did()), payload, random_id(rng));
    let signed = sign_blob(sender, &jwm);
    encrypt_blob(sender, receiver, &signed, rng)
}

/// Opens any message this module produces. Same layer rules as the compact
/// [`crate::diotcomm::open`]: encryption is peeled first, a nested
/// signature is checked, and the inner signer must equal the outer
/// encryptor.
pub fn open(
    receiver: &AgentIdentity,
    resolver: &impl Resolver,
    message: &[u8],
) -> Result<OpenedMessage, BaselineError> {
    let probe: serde_json::Value = serde_json::from_slice(message).map_err(json_err)?;
    if probe.get("ciphertext").is_some() {
        let (outer_sender, plaintext) = decrypt_blob(receiver, resolver, message)?;
        let inner: serde_json::Value =
            serde_json::from_slice(&plaintext).map_err(json_err)?;
        if inner.get("signatures").is_some() {
            let (signer, payload) = verify_blob(resolver, &plaintext)?;
            if signer != outer_sender {
                return Err(BaselineError::SenderMismatch);
            }
            Ok(OpenedMessage {
                sender: signer,
                payload,
                signed: true,
                encrypted: true,
            })
        } else {
            let (from, payload) = parse_jwm(&plaintext)?;
            if from != outer_sender {
                return Err(BaselineError::SenderMismatch);
            }
            Ok(OpenedMessage {
                sender: from,
                payload,
                signed: false,
                encrypted: true,
            })
        }
    } else if probe.get("signatures").is_some() {
        let (signer, payload) = verify_blob(resolver, message)?;
        Ok(OpenedMessage {
            sender: signer,
            payload,
            signed: true,
            encrypted: false,
        })
    } else {
        Err(BaselineError::Malformed("neither a JWS nor a JWE"))
    }
}

/// Reads the sender DID off a baseline message without verifying it, from
/// the JWS or JWE kid. Same caveats as [`crate::diotcomm::peek_sender`].
pub fn peek_sender(message: &[u8]) -> Result<SwarmDid, BaselineError> {
    let probe: serde_json::Value = serde_json::from_slice(message).map_err(json_err)?;
    let protected_b64 = if probe.get("ciphertext").is_some() {
        probe.get("protected").and_then(|v| v.as_str())
    } else if probe.get("signatures").is_some() {
        probe
            .get("signatures")
            .and_then(|s| s.get(0))
            .and_then(|s| s.get("protected"))
            .and_then(|v| v.as_str())
    } else {
        None
    }
    .ok_or(BaselineError::Malformed("neither a JWS nor a JWE"))?;
    let protected_json = B64
        .decode(protected_b64)
        .map_err(|_| BaselineError::Malformed("protected header is not base64url"))?;
    let probe: serde_json::Value = serde_json::from_slice(&protected_json).map_err(json_err)?;
    let kid = probe
        .get("kid")
        .and_then(|v| v.as_str())
        .ok_or(BaselineError::Malformed("missing kid"))?;
    Ok(parse_kid(kid)?.0)
}

fn derived_id(sender: &SwarmDid, payload: &[u8]) -> Uuid {
    let mut hasher = Sha256::new();
    hasher.update(sender.nsi());
    hasher.update(payload);
    let digest = hasher.finalize();
    uuid::Builder::from_random_bytes(digest[..16].try_into().unwrap()).into_uuid()
}

fn random_id<R: CryptoRng + ?Sized>(rng: &mut R) -> Uuid {
    let mut bytes = [0u8; 16];
    rng.fill_bytes(&mut bytes);
    uuid::Builder::from_random_bytes(bytes).into_uuid()
}

fn build_jwm(from: &SwarmDid, to: Option<&SwarmDid>, payload: &[u8], id: Uuid) -> Vec<u8> {
    // Embed raw only when extraction provably returns the input unchanged;
    // everything else is Base64url text.
    let body = match serde_json::from_slice::<Box<RawValue>>(payload) {
        Ok(raw)
            if raw.get().as_bytes() == payload
                && matches!(payload.first(), Some(b'{') | Some(b'[')) =>
        {
            raw
        }
        _ => serde_json::value::to_raw_value(&B64.encode(payload))
            .expect("a string always serializes"),
    };
    let jwm = Jwm {
        message_type: MESSAGE_TYPE.to_owned(),
        id: id.to_string(),
        from: from.to_string(),
        to: to.map(|did| vec![did.to_string()]),
        body,
    };
    serde_json::to_vec(&jwm).expect("JWM always serializes")
}

fn parse_jwm(bytes: &[u8]) -> Result<(SwarmDid, Vec<u8>), BaselineError> {
    let jwm: Jwm = serde_json::from_slice(bytes).map_err(json_err)?;
    if jwm.message_type != MESSAGE_TYPE {
        return Err(BaselineError::Malformed("unexpected message @type"));
    }
    Uuid::parse_str(&jwm.id).map_err(|_| BaselineError::Malformed("@id must be a UUID"))?;
    let from: SwarmDid = jwm.from.parse()?;
    let raw = jwm.body.get();
    let payload = if raw.starts_with('"') {
        let encoded: String = serde_json::from_str(raw).map_err(json_err)?;
        B64.decode(encoded)
            .map_err(|_| BaselineError::Malformed("body is not base64url"))?
    } else {
        raw.as_bytes().to_vec()
    };
    Ok((from, payload))
}

fn sign_blob(sender: &AgentIdentity, plaintext: &[u8]) -> Vec<u8> {
    let key = sender.document().primary_verification_key();
    let protected = JwsProtected {
        alg: ALG_SIGN.to_owned(),
        typ: TYP.to_owned(),
        kid: full_kid(sender.did(), key),
    };
    let protected_b64 = B64.encode(serde_json::to_vec(&protected).unwrap());
    let payload_b64 = B64.encode(plaintext);
    let signing_input = signing_input(&protected_b64, &payload_b64);
    let signature = SigningKey::from_bytes(sender.primary_signing_secret()).sign(&signing_input);
    let jws = JwsJson {
        payload: payload_b64,
        signatures: vec![JwsSignature {
            protected: protected_b64,
            signature: B64.encode(signature.to_bytes()),
        }],
    };
    serde_json::to_vec(&jws).expect("JWS always serializes")
}

fn verify_blob(
    resolver: &impl Resolver,
    message: &[u8],
) -> Result<(SwarmDid, Vec<u8>), BaselineError> {
    let jws: JwsJson = serde_json::from_slice(message).map_err(json_err)?;
    let [entry] = &jws.signatures[..] else {
        return Err(BaselineError::Malformed("expected exactly one signature"));
    };
    let protected_json = B64
        .decode(&entry.protected)
        .map_err(|_| BaselineError::Malformed("protected header is not base64url"))?;
    let protected: JwsProtected = serde_json::from_slice(&protected_json).map_err(json_err)?;
    if protected.alg != ALG_SIGN {
        return Err(BaselineError::UnsupportedAlgorithm(protected.alg));
    }
    if protected.typ != TYP {
        return Err(BaselineError::Malformed("unexpected typ"));
    }
    let (sender, kid) = parse_kid(&protected.kid)?;
    let doc = resolver
        .resolve(&sender)
        .ok_or(BaselineError::UnknownSender(sender))?;
    let key = doc
        .find_key(&kid)
        .filter(|k| k.role() == KeyRole::Verification)
        .ok_or(BaselineError::UnknownKey)?;

    let signature_bytes: [u8; 64] = B64
        .decode(&entry.signature)
        .ok()
        .and_then(|b| b.try_into().ok())
        .ok_or(BaselineError::Malformed("signature must be 64 bytes"))?;
    let verifying_key =
        VerifyingKey::from_bytes(key.public_key()).map_err(|_| BaselineError::BadSignature)?;
    verifying_key
        .verify_strict(
            &signing_input(&entry.protected, &jws.payload),
            &Signature::from_bytes(&signature_bytes),
        )
        .map_err(|_| BaselineError::BadSignature)?;

    let jwm_bytes = B64
        .decode(&jws.payload)
        .map_err(|_| BaselineError::Malformed("payload is not base64url"))?;
    let (from, payload) = parse_jwm(&jwm_bytes)?;
    if from != sender {
        return Err(BaselineError::SenderMismatch);
    }
    Ok((sender, payload))
}

fn encrypt_blob<R: CryptoRng + ?Sized>(
    sender: &AgentIdentity,
    receiver: &DidDocument,
    plaintext: &[u8],
    rng: &mut R,
) -> Result<Vec<u8>, BaselineError> {
    if plaintext.len() > MAX_PLAINTEXT {
        return Err(BaselineError::PayloadTooLarge);
    }
    let key = sender.document().primary_agreement_key();
    let protected = JweProtected {
        alg: ALG_KEY_AGREEMENT.to_owned(),
        enc: ENC_CONTENT.to_owned(),
        typ: TYP.to_owned(),
        kid: full_kid(sender.did(), key),
    };
    let protected_b64 = B64.encode(serde_json::to_vec(&protected).unwrap());

    let cek = derive_cek(
        &shared_secret(
            sender.primary_agreement_secret(),
            receiver.primary_agreement_key().public_key(),
        )
        .map_err(|_| BaselineError::WeakSharedSecret)?,
    );
    let mut nonce = [0u8; NONCE_LEN];
    rng.fill_bytes(&mut nonce);
    let sealed = Aes128Ccm::new((&cek).into())
        .encrypt(
            (&nonce).into(),
            Payload {
                msg: plaintext,
                aad: protected_b64.as_bytes(),
            },
        )
        .map_err(|_| BaselineError::PayloadTooLarge)?;
    let (ciphertext, tag) = sealed.split_at(sealed.len() - AEAD_TAG_LEN);

    let jwe = JweJson {
        protected: protected_b64,
        iv: B64.encode(nonce),
        ciphertext: B64.encode(ciphertext),
        tag: B64.encode(tag),
    };
    Ok(serde_json::to_vec(&jwe).expect("JWE always serializes"))
}

fn decrypt_blob(
    receiver: &AgentIdentity,
    resolver: &impl Resolver,
    message: &[u8],
) -> Result<(SwarmDid, Vec<u8>), BaselineError> {
    let jwe: JweJson = serde_json::from_slice(message).map_err(json_err)?;
    let protected_json = B64
        .decode(&jwe.protected)
        .map_err(|_| BaselineError::Malformed("protected header is not base64url"))?;
    let protected: JweProtected = serde_json::from_slice(&protected_json).map_err(json_err)?;
    if protected.alg != ALG_KEY_AGREEMENT {
        return Err(BaselineError::UnsupportedAlgorithm(protected.alg));
    }
    if protected.enc != ENC_CONTENT {
        return Err(BaselineError::UnsupportedAlgorithm(protected.enc));
    }
    if protected.typ != TYP {
        return Err(BaselineError::Malformed("unexpected typ"));
    }
    let (sender, kid) = parse_kid(&protected.kid)?;
    let doc = resolver
        .resolve(&sender)
        .ok_or(BaselineError::UnknownSender(sender))?;
    let key = doc
        .find_key(&kid)
        .filter(|k| k.role() == KeyRole::Agreement)
        .ok_or(BaselineError::UnknownKey)?;

    let nonce: [u8; NONCE_LEN] = B64
        .decode(&jwe.iv)
        .ok()
        .and_then(|b| b.try_into().ok())
        .ok_or(BaselineError::Malformed("iv must be 13 bytes"))?;
    let mut sealed = B64
        .decode(&jwe.ciphertext)
        .map_err(|_| BaselineError::Malformed("ciphertext is not base64url"))?;
    let tag = B64
        .decode(&jwe.tag)
        .map_err(|_| BaselineError::Malformed("tag is not base64url"))?;
    if tag.len() != AEAD_TAG_LEN {
        return Err(BaselineError::Malformed("tag must be 8 bytes"));
    }
    sealed.extend_from_slice(&tag);

    let cek = derive_cek(
        &shared_secret(receiver.primary_agreement_secret(), key.public_key())
            .map_err(|_| BaselineError::WeakSharedSecret)?,
    );
    let plaintext = Aes128Ccm::new((&cek).into())
        .decrypt(
            (&nonce).into(),
            Payload {
                msg: &sealed,
                aad: jwe.protected.as_bytes(),
            },
        )
        .map_err(|_| BaselineError::AeadFailure)?;
    Ok((sender, plaintext))
}

fn full_kid(did: &SwarmDid, key: &PublicKeyEntry) -> String {
    format!("{did}#{}", key.key_id_base58())
}

fn parse_kid(kid: &str) -> Result<(SwarmDid, KeyId), BaselineError> {
    let (did, fragment) = kid
        .split_once('#')
        .ok_or(BaselineError::Malformed("kid must be <did>#<key id>"))?;
    let did: SwarmDid = did.parse()?;
    let bytes = bs58::decode(fragment)
        .into_vec()
        .map_err(|_| BaselineError::Malformed("kid fragment is not base58"))?;
    let key_id: [u8; KEY_ID_LEN] = bytes
        .try_into()
        .map_err(|_| BaselineError::Malformed("kid fragment must be 8 bytes"))?;
    Ok((did, key_id))
}

fn signing_input(protected_b64: &str, payload_b64: &str) -> Vec<u8> {
    let mut input = Vec::with_capacity(protected_b64.len() + 1 + payload_b64.len());
    input.extend_from_slice(protected_b64.as_bytes());
    input.push(b'.');
    input.extend_from_slice(payload_b64.as_bytes());
    input
}
