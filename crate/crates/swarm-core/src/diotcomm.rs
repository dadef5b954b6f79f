//! Compact secure-messaging envelopes.
//!
//! Two layers, both standard COSE single-recipient structures in canonical
//! CBOR:
//!
//! * **Signed**: `COSE_Sign1` (tag 18). Protected header `{1: -8, 4: nsi}`
//!   pins EdDSA and names the sender by its 16-byte NSI, which is all a
//!   receiver needs to resolve the DDo and pick the verification key. When
//!   the sender lists a single verification key (the normal device case)
//!   nothing else travels; with several keys an 8-byte key selector rides
//!   in the unprotected header.
//! * **Encrypted**: `COSE_Encrypt0` (tag 16). Protected header
//!   `{1: 10, 4: nsi}` pins AES-CCM-16-64-128; the 13-byte nonce sits in
//!   the unprotected header. The content key comes from a static-static
//!   X25519 agreement between the two parties' agreement keys, run through
//!   HKDF-SHA256 with a fixed COSE KDF context. Static-static means the
//!   receiver needs nothing but the sender's DDo to decrypt, and the wire
//!   never names the receiver.
//!
//! Sign-then-encrypt nests a complete Sign1 as the Encrypt0 plaintext.
//! [`open`] peels whatever arrives and insists the inner signer equals the
//! outer encryptor, so a relay cannot re-wrap someone else's signature as
//! its own message.

use crate::cbor::{DecodeError, Value};
use crate::did::{DidError, SwarmDid, NSI_LEN};
use crate::document::{AgentIdentity, DidDocument};
use crate::keys::{KeyId, KeyRole, SECRET_KEY_LEN};
use aes::Aes128;
use ccm::aead::{Aead, KeyInit, Payload};
use ccm::consts::{U13, U8};
use ccm::Ccm;
use ed25519_dalek::{Signature, Signer, SigningKey, VerifyingKey};
use rand::CryptoRng;
use std::collections::HashMap;
use x25519_dalek::{PublicKey as XPublicKey, StaticSecret};

pub(crate) type Aes128Ccm = Ccm<Aes128, U8, U13>;

const TAG_SIGN1: u64 = 18;
const TAG_ENCRYPT0: u64 = 16;
const ALG_EDDSA: i64 = -8;
const ALG_AES_CCM_16_64_128: i64 = 10;
const HDR_ALG: i64 = 1;
const HDR_KID: i64 = 4;
const HDR_IV: i64 = 5;
pub const NONCE_LEN: usize = 13;
pub(crate) const AEAD_TAG_LEN: usize = 8;
// AES-CCM-16-64-128 uses a 2-byte length field, so one message carries at
// most 2^16 - 1 plaintext bytes.
pub(crate) const MAX_PLAINTEXT: usize = 65535;

/// Fixed COSE_KDF_Context for the CEK derivation:
/// `[10, [null, null, null], [null, null, null], [128, h'']]`
/// (algorithm id, empty PartyU, empty PartyV, 128-bit key, no supplemental
/// data). Both parties can rebuild it from nothing, so no KDF parameters
/// ever travel.
const KDF_CONTEXT: [u8; 14] = [
    0x84, 0x0a, 0x83, 0xf6, 0xf6, 0xf6, 0x83, 0xf6, 0xf6, 0xf6, 0x82, 0x18, 0x80, 0x40,
];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EnvelopeError {
    #[error("envelope is not valid CBOR: {0}")]
    Cbor(#[from] DecodeError),
    #[error("malformed envelope: {0}")]
    Malformed(&'static str),
    #[error("unsupported algorithm label {0}")]
    UnsupportedAlgorithm(i64),
    #[error("cannot resolve sender {0}")]
    UnknownSender(SwarmDid),
    #[error("sender lists no verification key matching the selector")]
    UnknownKey,
    #[error("signature check failed")]
    BadSignature,
    #[error("decryption failed")]
    AeadFailure,
    #[error("inner signer is not the outer sender")]
    SenderMismatch,
    #[error("peer agreement key produces a degenerate shared secret")]
    WeakSharedSecret,
    #[error("payload exceeds the AEAD size limit")]
    PayloadTooLarge,
    #[error(transparent)]
    Did(#[from] DidError),
}

/// Maps a sender DID to its current DDo. Implemented by the in-memory map
/// used in tests and by the registry client for live lookups.
pub trait Resolver {
    fn resolve(&self, did: &SwarmDid) -> Option<DidDocument>;
}

impl Resolver for HashMap<SwarmDid, DidDocument> {
    fn resolve(&self, did: &SwarmDid) -> Option<DidDocument> {
        self.get(did).cloned()
    }
}

impl<T: Resolver + ?Sized> Resolver for &T {
    fn resolve(&self, did: &SwarmDid) -> Option<DidDocument> {
        (**self).resolve(did)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verified {
    pub sender: SwarmDid,
    pub payload: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decrypted {
    pub sender: SwarmDid,
    pub plaintext: Vec<u8>,
}

/// Result of [`open`]: the payload plus what protections actually covered
/// it. Callers that require authenticity must check `signed`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpenedMessage {
    pub sender: SwarmDid,
    pub payload: Vec<u8>,
    pub signed: bool,
    pub encrypted: bool,
}

/// Signs `payload` with the sender's primary verification key.
pub fn sign(sender: &AgentIdentity, payload: &[u8]) -> Vec<u8> {
    let doc = sender.document();
    // The selector is dead weight with one key, so it only appears when a
    // receiver could actually pick wrong.
    let selector = (doc.verification_keys().len() > 1)
        .then(|| *doc.primary_verification_key().key_id());
    sign_raw(
        sender.did().nsi(),
        sender.primary_signing_secret(),
        selector,
        payload,
    )
}

/// Checks a signed envelope and returns the sender and payload.
pub fn verify(resolver: &impl Resolver, envelope: &[u8]) -> Result<Verified, EnvelopeError> {
    let parts = parse_sign1(envelope)?;
    verify_parts(resolver, parts)
}

/// Encrypts `payload` so that only `receiver` can read it. Fresh random
/// nonce per message; the caller supplies the RNG so deterministic tests
/// and seeded benchmarks stay possible.
pub fn encrypt<R: CryptoRng + ?Sized>(
    sender: &AgentIdentity,
    receiver: &DidDocument,
    payload: &[u8],
    rng: &mut R,
) -> Result<Vec<u8>, EnvelopeError> {
    let mut nonce = [0u8; NONCE_LEN];
    rng.fill_bytes(&mut nonce);
    encrypt_raw(
        sender.did().nsi(),
        sender.primary_agreement_secret(),
        receiver.primary_agreement_key().public_key(),
        &nonce,
        payload,
    )
}

/// Decrypts an encrypted envelope addressed to `receiver`.
pub fn decrypt(
    receiver: &AgentIdentity,
    resolver: &impl Resolver,
    envelope: &[u8],
) -> Result<Decrypted, EnvelopeError> {
    let parts = parse_encrypt0(envelope)?;
    let sender_doc = resolver
        .resolve(&parts.sender)
        .ok_or(EnvelopeError::UnknownSender(parts.sender))?;
    let cek = derive_cek(&shared_secret(
        receiver.primary_agreement_secret(),
        sender_doc.primary_agreement_key().public_key(),
    )?);
    let aad = enc_structure(&parts.protected);
    let plaintext = Aes128Ccm::new((&cek).into())
        .decrypt(
            (&parts.nonce).into(),
            Payload {
                msg: &parts.ciphertext,
                aad: &aad,
            },
        )
        .map_err(|_| EnvelopeError::AeadFailure)?;
    Ok(Decrypted {
        sender: parts.sender,
        plaintext,
    })
}

/// Signs, then encrypts the complete signed envelope.
pub fn sign_encrypt<R: CryptoRng + ?Sized>(
    sender: &AgentIdentity,
    receiver: &DidDocument,
    payload: &[u8],
    rng: &mut R,
) -> Result<Vec<u8>, EnvelopeError> {
    let signed = sign(sender, payload);
    encrypt(sender, receiver, &signed, rng)
}

/// Opens any envelope this module produces, peeling encryption and checking
/// signatures as found. For nested envelopes the inner signer must be the
/// outer encryptor.
pub fn open(
    receiver: &AgentIdentity,
    resolver: &impl Resolver,
    envelope: &[u8],
) -> Result<OpenedMessage, EnvelopeError> {
    match Value::from_bytes(envelope)? {
        Value::Tag(TAG_SIGN1, _) => {
            let v = verify(resolver, envelope)?;
            Ok(OpenedMessage {
                sender: v.sender,
                payload: v.payload,
                signed: true,
                encrypted: false,
            })
        }
        Value::Tag(TAG_ENCRYPT0, _) => {
            let dec = decrypt(receiver, resolver, envelope)?;
            if is_sign1(&dec.plaintext) {
                let v = verify(resolver, &dec.plaintext)?;
                if v.sender != dec.sender {
                    return Err(EnvelopeError::SenderMismatch);
                }
                Ok(OpenedMessage {
                    sender: v.sender,
                    payload: v.payload,
                    signed: true,
                    encrypted: true,
                })
            } else {
                Ok(OpenedMessage {
                    sender: dec.sender,
                    payload: dec.plaintext,
                    signed: false,
                    encrypted: true,
                })
            }
        }
        _ => Err(EnvelopeError::Malformed("expected a COSE envelope tag")),
    }
}

/// Extracts the payload of a signed envelope without checking anything but
/// structure. For callers that must read the payload before they can know
/// which key verifies it, such as a registry receiving a self-signed
/// enrollment; never treat the result as authenticated.
pub fn signed_payload(envelope: &[u8]) -> Result<Vec<u8>, EnvelopeError> {
    Ok(parse_sign1(envelope)?.payload)
}

/// Reads the sender DID off either envelope kind without verifying it.
/// Lets a receiver resolve the sender's DDo first and then run the real
/// checks against it.
pub fn peek_sender(envelope: &[u8]) -> Result<SwarmDid, EnvelopeError> {
    match Value::from_bytes(envelope)? {
        Value::Tag(TAG_SIGN1, _) => Ok(parse_sign1(envelope)?.sender),
        Value::Tag(TAG_ENCRYPT0, _) => Ok(parse_encrypt0(envelope)?.sender),
        _ => Err(EnvelopeError::Malformed("expected a COSE envelope tag")),
    }
}

/// Envelope bytes added by [`sign`] on top of the payload, single-key case.
pub fn sign_overhead(payload_len: usize) -> usize {
    // tag + array head + protected bstr (1 head + 21 body) + empty
    // unprotected map + signature bstr (2 head + 64) = 91 fixed bytes.
    91 + bstr_head_len(payload_len)
}

/// Envelope bytes added by [`encrypt`] on top of the plaintext.
pub fn encrypt_overhead(payload_len: usize) -> usize {
    // 40 fixed framing bytes plus the 8-byte AEAD tag.
    40 + AEAD_TAG_LEN + bstr_head_len(payload_len + AEAD_TAG_LEN)
}

/// Envelope bytes added by [`sign_encrypt`] on top of the payload.
pub fn sign_encrypt_overhead(payload_len: usize) -> usize {
    let signed_len = payload_len + sign_overhead(payload_len);
    sign_overhead(payload_len) + encrypt_overhead(signed_len)
}

fn bstr_head_len(len: usize) -> usize {
    match len {
        0..=23 => 1,
        24..=255 => 2,
        256..=65535 => 3,
        _ => 5,
    }
}

fn protected_header(alg: i64, nsi: &[u8; NSI_LEN]) -> Vec<u8> {
    Value::Map(vec![
        (Value::int(HDR_ALG), Value::int(alg)),
        (Value::int(HDR_KID), Value::Bytes(nsi.to_vec())),
    ])
    .to_bytes()
}

fn sig_structure(protected: &[u8], payload: &[u8]) -> Vec<u8> {
    Value::Array(vec![
        Value::Text("Signature1".into()),
        Value::Bytes(protected.to_vec()),
        Value::Bytes(Vec::new()),
        Value::Bytes(payload.to_vec()),
    ])
    .to_bytes()
}

fn enc_structure(protected: &[u8]) -> Vec<u8> {
    Value::Array(vec![
        Value::Text("Encrypt0".into()),
        Value::Bytes(protected.to_vec()),
        Value::Bytes(Vec::new()),
    ])
    .to_bytes()
}

pub(crate) fn derive_cek(shared: &[u8; 32]) -> [u8; 16] {
    let mut cek = [0u8; 16];
    hkdf::Hkdf::<sha2::Sha256>::new(None, shared)
        .expand(&KDF_CONTEXT, &mut cek)
        .expect("16 bytes is far below the HKDF output limit");
    cek
}

pub(crate) fn shared_secret(
    secret: &[u8; SECRET_KEY_LEN],
    their_public: &[u8; 32],
) -> Result<[u8; 32], EnvelopeError> {
    let shared = StaticSecret::from(*secret).diffie_hellman(&XPublicKey::from(*their_public));
    if !shared.was_contributory() {
        return Err(EnvelopeError::WeakSharedSecret);
    }
    Ok(*shared.as_bytes())
}

fn sign_raw(
    nsi: &[u8; NSI_LEN],
    secret: &[u8; SECRET_KEY_LEN],
    selector: Option<KeyId>,
    payload: &[u8],
) -> Vec<u8> {
    let protected = protected_header(ALG_EDDSA, nsi);
    let signature = SigningKey::from_bytes(secret).sign(&sig_structure(&protected, payload));
    let unprotected = match selector {
        Some(kid) => Value::Map(vec![(Value::int(HDR_KID), Value::Bytes(kid.to_vec()))]),
        None => Value::Map(Vec::new()),
    };
    Value::Tag(
        TAG_SIGN1,
        Box::new(Value::Array(vec![
            Value::Bytes(protected),
            unprotected,
            Value::Bytes(payload.to_vec()),
            Value::Bytes(signature.to_bytes().to_vec()),
        ])),
    )
    .to_bytes()
}

fn encrypt_raw(
    nsi: &[u8; NSI_LEN],
    secret: &[u8; SECRET_KEY_LEN],
    receiver_public: &[u8; 32],
    nonce: &[u8; NONCE_LEN],
    payload: &[u8],
) -> Result<Vec<u8>, EnvelopeError> {
    if payload.len() > MAX_PLAINTEXT {
        return Err(EnvelopeError::PayloadTooLarge);
    }
    let cek = derive_cek(&shared_secret(secret, receiver_public)?);
    let protected = protected_header(ALG_AES_CCM_16_64_128, nsi);
    let aad = enc_structure(&protected);
    let ciphertext = Aes128Ccm::new((&cek).into())
        .encrypt(
            nonce.into(),
            Payload {
                msg: payload,
                aad: &aad,
            },
        )
        .map_err(|_| EnvelopeError::PayloadTooLarge)?;
    Ok(Value::Tag(
        TAG_ENCRYPT0,
        Box::new(Value::Array(vec![
            Value::Bytes(protected),
            Value::Map(vec![(Value::int(HDR_IV), Value::Bytes(nonce.to_vec()))]),
            Value::Bytes(ciphertext),
        ])),
    )
    .to_bytes())
}

struct Sign1Parts {
    sender: SwarmDid,
    protected: Vec<u8>,
    selector: Option<KeyId>,
    payload: Vec<u8>,
    signature: [u8; 64],
}

fn parse_sign1(envelope: &[u8]) -> Result<Sign1Parts, EnvelopeError> {
    let value = Value::from_bytes(envelope)?;
    let Value::Tag(TAG_SIGN1, body) = value else {
        return Err(EnvelopeError::Malformed("expected a COSE_Sign1 tag"));
    };
    let [protected, unprotected, payload, signature] = body
        .as_array()
        .ok_or(EnvelopeError::Malformed("envelope body must be an array"))?
    else {
        return Err(EnvelopeError::Malformed("COSE_Sign1 must have 4 fields"));
    };

    let protected = protected
        .as_bytes()
        .ok_or(EnvelopeError::Malformed("protected header must be a byte string"))?
        .to_vec();
    let sender = parse_protected(&protected, ALG_EDDSA)?;

    let mut selector = None;
    for (label, val) in unprotected
        .as_map()
        .ok_or(EnvelopeError::Malformed("unprotected header must be a map"))?
    {
        match label.as_int() {
            Some(HDR_KID) => {
                let kid: KeyId = val
                    .as_bytes()
                    .and_then(|b| b.try_into().ok())
                    .ok_or(EnvelopeError::Malformed(
                        "key selector must be an 8-byte string",
                    ))?;
                selector = Some(kid);
            }
            _ => return Err(EnvelopeError::Malformed("unexpected unprotected header")),
        }
    }

    let payload = payload
        .as_bytes()
        .ok_or(EnvelopeError::Malformed("payload must be a byte string"))?
        .to_vec();
    let signature: [u8; 64] = signature
        .as_bytes()
        .and_then(|b| b.try_into().ok())
        .ok_or(EnvelopeError::Malformed("signature must be 64 bytes"))?;

    Ok(Sign1Parts {
        sender,
        protected,
        selector,
        payload,
        signature,
    })
}

fn verify_parts(resolver: &impl Resolver, parts: Sign1Parts) -> Result<Verified, EnvelopeError> {
    let doc = resolver
        .resolve(&parts.sender)
        .ok_or(EnvelopeError::UnknownSender(parts.sender))?;
    let key = match parts.selector {
        Some(kid) => doc
            .find_key(&kid)
            .filter(|k| k.role() == KeyRole::Verification)
            .ok_or(EnvelopeError::UnknownKey)?,
        None => doc.primary_verification_key(),
    };
    let verifying_key =
        VerifyingKey::from_bytes(key.public_key()).map_err(|_| EnvelopeError::BadSignature)?;
    verifying_key
        .verify_strict(
            &sig_structure(&parts.protected, &parts.payload),
            &Signature::from_bytes(&parts.signature),
        )
        .map_err(|_| EnvelopeError::BadSignature)?;
    Ok(Verified {
        sender: parts.sender,
        payload: parts.payload,
    })
}

struct Encrypt0Parts {
    sender: SwarmDid,
    protected: Vec<u8>,
    nonce: [u8; NONCE_LEN],
    ciphertext: Vec<u8>,
}

fn parse_encrypt0(envelope: &[u8]) -> Result<Encrypt0Parts, EnvelopeError> {
    let value = Value::from_bytes(envelope)?;
    let Value::Tag(TAG_ENCRYPT0, body) = value else {
        return Err(EnvelopeError::Malformed("expected a COSE_Encrypt0 tag"));
    };
    let [protected, unprotected, ciphertext] = body
        .as_array()
        .ok_or(EnvelopeError::Malformed("envelope body must be an array"))?
    else {
        return Err(EnvelopeError::Malformed("COSE_Encrypt0 must have 3 fields"));
    };

    let protected = protected
        .as_bytes()
        .ok_or(EnvelopeError::Malformed("protected header must be a byte string"))?
        .to_vec();
    let sender = parse_protected(&protected, ALG_AES_CCM_16_64_128)?;

    let mut nonce = None;
    for (label, val) in unprotected
        .as_map()
        .ok_or(EnvelopeError::Malformed("unprotected header must be a map"))?
    {
        match label.as_int() {
            Some(HDR_IV) => {
                let iv: [u8; NONCE_LEN] = val
                    .as_bytes()
                    .and_then(|b| b.try_into().ok())
                    .ok_or(EnvelopeError::Malformed("nonce must be a 13-byte string"))?;
                nonce = Some(iv);
            }
            _ => return Err(EnvelopeError::Malformed("unexpected unprotected header")),
        }
    }
    let nonce = nonce.ok_or(EnvelopeError::Malformed("missing nonce"))?;

    let ciphertext = ciphertext
        .as_bytes()
        .ok_or(EnvelopeError::Malformed("ciphertext must be a byte string"))?;
    if ciphertext.len() < AEAD_TAG_LEN {
        return Err(EnvelopeError::Malformed("ciphertext shorter than its tag"));
    }

    Ok(Encrypt0Parts {
        sender,
        protected,
        nonce,
        ciphertext: ciphertext.to_vec(),
    })
}

/// Protected headers carry exactly the algorithm and the sender NSI.
fn parse_protected(bytes: &[u8], expected_alg: i64) -> Result<SwarmDid, EnvelopeError> {
    let value = Value::from_bytes(bytes)?;
    let entries = value
        .as_map()
        .ok_or(EnvelopeError::Malformed("protected header must be a map"))?;
    let mut alg = None;
    let mut sender = None;
    for (label, val) in entries {
        match label.as_int() {
            Some(HDR_ALG) => {
                alg = Some(
                    val.as_int()
                        .ok_or(EnvelopeError::Malformed("alg must be an integer"))?,
                )
            }
            Some(HDR_KID) => {
                let nsi = val
                    .as_bytes()
                    .ok_or(EnvelopeError::Malformed("sender id must be a byte string"))?;
                sender = Some(SwarmDid::from_nsi_slice(nsi)?);
            }
            _ => return Err(EnvelopeError::Malformed("unexpected protected header")),
        }
    }
    let alg = alg.ok_or(EnvelopeError::Malformed("missing algorithm"))?;
    if alg != expected_alg {
        return Err(EnvelopeError::UnsupportedAlgorithm(alg));
    }
    sender.ok_or(EnvelopeError::Malformed("missing sender id"))
}

fn is_sign1(bytes: &[u8]) -> bool {
    matches!(Value::from_bytes(bytes), Ok(Value::Tag(TAG_SIGN1, _)))
}
