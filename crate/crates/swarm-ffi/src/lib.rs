//! C bindings for the identity and envelope layers.
//!
//! Conventions, mirrored in the generated `include/swarm_ffi.h`:
//!
//! * Every function returns a [`SwarmStatus`]; results travel through out
//!   pointers, which are written only on `SWARM_STATUS_OK`.
//! * Byte outputs are [`SwarmBuf`] values owned by the library; release
//!   them with [`swarm_buf_free`]. Handles are opaque and released with
//!   their own `_free` functions. All `_free` functions accept null.
//! * After any failure, [`swarm_last_error`] returns a message that stays
//!   valid until the next failure on the same thread.
//! * DID text and document bytes use the same wire formats as the Rust
//!   API: JSON, direct CBOR, or the compact form.

// The pointer contract is stated once above instead of per function; a
// per-function Safety section would only restate it fifteen times.
#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::collections::HashMap;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use swarm_core::codec::{self, WireFormat};
use swarm_core::diotcomm::{self, EnvelopeError};
use swarm_core::document::DidDocument;
use swarm_core::{AgentIdentity, SwarmDid};

/// Result of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwarmStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// An argument was present but unusable (bad URL, bad format tag, ...).
    InvalidArgument = 2,
    /// Input bytes did not parse as a document or envelope.
    Decode = 3,
    /// Signature verification or decryption failed.
    Crypto = 4,
    /// The envelope names a sender the peer set does not contain.
    UnknownSender = 5,
    /// The payload exceeds the envelope size limit.
    PayloadTooLarge = 6,
    /// A bug tripped internally; the library caught it instead of crashing.
    Internal = 7,
}

/// Document serialization selector.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwarmFormat {
    Json = 0,
    Cbor = 1,
    CborDi = 2,
}

impl From<SwarmFormat> for WireFormat {
    fn from(f: SwarmFormat) -> WireFormat {
        match f {
            SwarmFormat::Json => WireFormat::Json,
            SwarmFormat::Cbor => WireFormat::CborDirect,
            SwarmFormat::CborDi => WireFormat::CborDi,
        }
    }
}

/// An owned byte buffer handed out by the library.
#[repr(C)]
pub struct SwarmBuf {
    pub data: *mut u8,
    pub len: usize,
}

/// An agent identity: document plus private keys. Opaque.
pub struct SwarmIdentity(AgentIdentity);

/// A set of known peer documents used to authenticate senders. Opaque.
pub struct SwarmPeerSet(HashMap<SwarmDid, DidDocument>);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: impl Into<String>) {
    let mut message = message.into();
    message.retain(|c| c != '\0');
    LAST_ERROR.with(|slot| *slot.borrow_mut() = CString::new(message).unwrap());
}

fn fail(status: SwarmStatus, message: impl Into<String>) -> SwarmStatus {
    set_error(message);
    status
}

fn envelope_failure(e: EnvelopeError) -> SwarmStatus {
    let status = match &e {
        EnvelopeError::BadSignature
        | EnvelopeError::AeadFailure
        | EnvelopeError::SenderMismatch
        | EnvelopeError::WeakSharedSecret => SwarmStatus::Crypto,
        EnvelopeError::UnknownSender(_) | EnvelopeError::UnknownKey => SwarmStatus::UnknownSender,
        EnvelopeError::PayloadTooLarge => SwarmStatus::PayloadTooLarge,
        _ => SwarmStatus::Decode,
    };
    fail(status, e.to_string())
}

/// Every entry point runs inside this, so a bug is a status code for the
/// caller instead of unwinding across the ABI.
fn guarded(body: impl FnOnce() -> SwarmStatus) -> SwarmStatus {
    catch_unwind(AssertUnwindSafe(body))
        .unwrap_or_else(|_| fail(SwarmStatus::Internal, "internal panic"))
}

unsafe fn slice_arg<'a>(data: *const u8, len: usize) -> Option<&'a [u8]> {
    if data.is_null() {
        (len == 0).then_some(&[])
    } else {
        Some(std::slice::from_raw_parts(data, len))
    }
}

unsafe fn write_buf(out: *mut SwarmBuf, bytes: Vec<u8>) {
    let boxed = bytes.into_boxed_slice();
    let len = boxed.len();
    let data = Box::into_raw(boxed) as *mut u8;
    out.write(SwarmBuf { data, len });
}

/// Message for the most recent failure on this thread. Never null; empty
/// before the first failure. Valid until the next failure on this thread.
#[no_mangle]
pub extern "C" fn swarm_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Releases a buffer returned by the library. Null `data` is a no-op.
#[no_mangle]
pub unsafe extern "C" fn swarm_buf_free(buf: SwarmBuf) {
    if !buf.data.is_null() {
        drop(Box::from_raw(ptr::slice_from_raw_parts_mut(buf.data, buf.len)));
    }
}

/// Generates a fresh identity whose document advertises `endpoint_url`.
#[no_mangle]
pub unsafe extern "C" fn swarm_identity_generate(
    endpoint_url: *const c_char,
    out: *mut *mut SwarmIdentity,
) -> SwarmStatus {
    guarded(|| {
        if endpoint_url.is_null() || out.is_null() {
            return fail(SwarmStatus::NullArgument, "null argument");
        }
        let url = match CStr::from_ptr(endpoint_url).to_str() {
            Ok(url) => url,
            Err(_) => return fail(SwarmStatus::InvalidArgument, "endpoint url is not UTF-8"),
        };
        match AgentIdentity::generate(url, &mut rand::rng()) {
            Ok(identity) => {
                out.write(Box::into_raw(Box::new(SwarmIdentity(identity))));
                SwarmStatus::Ok
            }
            Err(e) => fail(SwarmStatus::InvalidArgument, e.to_string()),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn swarm_identity_free(identity: *mut SwarmIdentity) {
    if !identity.is_null() {
        drop(Box::from_raw(identity));
    }
}

/// Writes the identity's DID in text form (no trailing NUL).
#[no_mangle]
pub unsafe extern "C" fn swarm_identity_did(
    identity: *const SwarmIdentity,
    out: *mut SwarmBuf,
) -> SwarmStatus {
    guarded(|| {
        let Some(identity) = identity.as_ref() else {
            return fail(SwarmStatus::NullArgument, "null identity");
        };
        if out.is_null() {
            return fail(SwarmStatus::NullArgument, "null out buffer");
        }
        write_buf(out, identity.0.did().to_string().into_bytes());
        SwarmStatus::Ok
    })
}

/// Serializes the identity's document in the requested format.
#[no_mangle]
pub unsafe extern "C" fn swarm_identity_document(
    identity: *const SwarmIdentity,
    format: SwarmFormat,
    out: *mut SwarmBuf,
) -> SwarmStatus {
    guarded(|| {
        let Some(identity) = identity.as_ref() else {
            return fail(SwarmStatus::NullArgument, "null identity");
        };
        if out.is_null() {
            return fail(SwarmStatus::NullArgument, "null out buffer");
        }
        write_buf(out, codec::encode(identity.0.document(), format.into()));
        SwarmStatus::Ok
    })
}

/// Re-serializes an encoded document into another format.
#[no_mangle]
pub unsafe extern "C" fn swarm_document_convert(
    doc: *const u8,
    doc_len: usize,
    from: SwarmFormat,
    to: SwarmFormat,
    out: *mut SwarmBuf,
) -> SwarmStatus {
    guarded(|| {
        let (Some(bytes), false) = (slice_arg(doc, doc_len), out.is_null()) else {
            return fail(SwarmStatus::NullArgument, "null argument");
        };
        match codec::convert(bytes, from.into(), to.into()) {
            Ok(converted) => {
                write_buf(out, converted);
                SwarmStatus::Ok
            }
            Err(e) => fail(SwarmStatus::Decode, e.to_string()),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn swarm_peer_set_new(out: *mut *mut SwarmPeerSet) -> SwarmStatus {
    guarded(|| {
        if out.is_null() {
            return fail(SwarmStatus::NullArgument, "null out pointer");
        }
        out.write(Box::into_raw(Box::new(SwarmPeerSet(HashMap::new()))));
        SwarmStatus::Ok
    })
}

#[no_mangle]
pub unsafe extern "C" fn swarm_peer_set_free(peers: *mut SwarmPeerSet) {
    if !peers.is_null() {
        drop(Box::from_raw(peers));
    }
}

/// Adds (or replaces) a peer document, keyed by the DID it declares.
#[no_mangle]
pub unsafe extern "C" fn swarm_peer_set_add(
    peers: *mut SwarmPeerSet,
    doc: *const u8,
    doc_len: usize,
    format: SwarmFormat,
) -> SwarmStatus {
    guarded(|| {
        let Some(peers) = peers.as_mut() else {
            return fail(SwarmStatus::NullArgument, "null peer set");
        };
        let Some(bytes) = slice_arg(doc, doc_len) else {
            return fail(SwarmStatus::NullArgument, "null document");
        };
        match codec::decode(bytes, format.into()) {
            Ok(document) => {
                peers.0.insert(*document.did(), document);
                SwarmStatus::Ok
            }
            Err(e) => fail(SwarmStatus::Decode, e.to_string()),
        }
    })
}

/// Signs `payload`, producing a compact signed envelope.
#[no_mangle]
pub unsafe extern "C" fn swarm_sign(
    identity: *const SwarmIdentity,
    payload: *const u8,
    payload_len: usize,
    out: *mut SwarmBuf,
) -> SwarmStatus {
    guarded(|| {
        let Some(identity) = identity.as_ref() else {
            return fail(SwarmStatus::NullArgument, "null identity");
        };
        let (Some(payload), false) = (slice_arg(payload, payload_len), out.is_null()) else {
            return fail(SwarmStatus::NullArgument, "null argument");
        };
        write_buf(out, diotcomm::sign(&identity.0, payload));
        SwarmStatus::Ok
    })
}

/// Verifies a signed envelope against the peer set. On success writes the
/// payload and the sender's DID text.
#[no_mangle]
pub unsafe extern "C" fn swarm_verify(
    peers: *const SwarmPeerSet,
    envelope: *const u8,
    envelope_len: usize,
    out_payload: *mut SwarmBuf,
    out_sender: *mut SwarmBuf,
) -> SwarmStatus {
    guarded(|| {
        let Some(peers) = peers.as_ref() else {
            return fail(SwarmStatus::NullArgument, "null peer set");
        };
        let Some(envelope) = slice_arg(envelope, envelope_len) else {
            return fail(SwarmStatus::NullArgument, "null envelope");
        };
        if out_payload.is_null() || out_sender.is_null() {
            return fail(SwarmStatus::NullArgument, "null out buffer");
        }
        match diotcomm::verify(&peers.0, envelope) {
            Ok(verified) => {
                write_buf(out_payload, verified.payload);
                write_buf(out_sender, verified.sender.to_string().into_bytes());
                SwarmStatus::Ok
            }
            Err(e) => envelope_failure(e),
        }
    })
}

unsafe fn receiver_document(
    doc: *const u8,
    doc_len: usize,
    format: SwarmFormat,
) -> Result<DidDocument, SwarmStatus> {
    let Some(bytes) = slice_arg(doc, doc_len) else {
        return Err(fail(SwarmStatus::NullArgument, "null receiver document"));
    };
    codec::decode(bytes, format.into()).map_err(|e| fail(SwarmStatus::Decode, e.to_string()))
}

/// Encrypts `payload` to the receiver described by an encoded document.
#[no_mangle]
pub unsafe extern "C" fn swarm_encrypt(
    identity: *const SwarmIdentity,
    receiver_doc: *const u8,
    receiver_doc_len: usize,
    receiver_format: SwarmFormat,
    payload: *const u8,
    payload_len: usize,
    out: *mut SwarmBuf,
) -> SwarmStatus {
    guarded(|| {
        let Some(identity) = identity.as_ref() else {
            return fail(SwarmStatus::NullArgument, "null identity");
        };
        let (Some(payload), false) = (slice_arg(payload, payload_len), out.is_null()) else {
            return fail(SwarmStatus::NullArgument, "null argument");
        };
        let receiver = match receiver_document(receiver_doc, receiver_doc_len, receiver_format) {
            Ok(doc) => doc,
            Err(status) => return status,
        };
        match diotcomm::encrypt(&identity.0, &receiver, payload, &mut rand::rng()) {
            Ok(envelope) => {
                write_buf(out, envelope);
                SwarmStatus::Ok
            }
            Err(e) => envelope_failure(e),
        }
    })
}

/// Decrypts an envelope addressed to `identity`, authenticating the sender
/// against the peer set.
#[no_mangle]
pub unsafe extern "C" fn swarm_decrypt(
    identity: *const SwarmIdentity,
    peers: *const SwarmPeerSet,
    envelope: *const u8,
    envelope_len: usize,
    out_payload: *mut SwarmBuf,
    out_sender: *mut SwarmBuf,
) -> SwarmStatus {
    guarded(|| {
        let (Some(identity), Some(peers)) = (identity.as_ref(), peers.as_ref()) else {
            return fail(SwarmStatus::NullArgument, "null identity or peer set");
        };
        let Some(envelope) = slice_arg(envelope, envelope_len) else {
            return fail(SwarmStatus::NullArgument, "null envelope");
        };
        if out_payload.is_null() || out_sender.is_null() {
            return fail(SwarmStatus::NullArgument, "null out buffer");
        }
        match diotcomm::decrypt(&identity.0, &peers.0, envelope) {
            Ok(decrypted) => {
                write_buf(out_payload, decrypted.plaintext);
                write_buf(out_sender, decrypted.sender.to_string().into_bytes());
                SwarmStatus::Ok
            }
            Err(e) => envelope_failure(e),
        }
    })
}

/// Signs then encrypts, binding the signature to the encryption sender.
#[no_mangle]
pub unsafe extern "C" fn swarm_sign_encrypt(
    identity: *const SwarmIdentity,
    receiver_doc: *const u8,
    receiver_doc_len: usize,
    receiver_format: SwarmFormat,
    payload: *const u8,
    payload_len: usize,
    out: *mut SwarmBuf,
) -> SwarmStatus {
    guarded(|| {
        let Some(identity) = identity.as_ref() else {
            return fail(SwarmStatus::NullArgument, "null identity");
        };
        let (Some(payload), false) = (slice_arg(payload, payload_len), out.is_null()) else {
            return fail(SwarmStatus::NullArgument, "null argument");
        };
        let receiver = match receiver_document(receiver_doc, receiver_doc_len, receiver_format) {
            Ok(doc) => doc,
            Err(status) => return status,
        };
        match diotcomm::sign_encrypt(&identity.0, &receiver, payload, &mut rand::rng()) {
            Ok(envelope) => {
                write_buf(out, envelope);
                SwarmStatus::Ok
            }
            Err(e) => envelope_failure(e),
        }
    })
}

/// Opens any compact envelope: verifies, decrypts, or both. `out_signed`
/// and `out_encrypted` report which protections were present; either may
/// be null if the caller does not care.
#[no_mangle]
pub unsafe extern "C" fn swarm_open(
    identity: *const SwarmIdentity,
    peers: *const SwarmPeerSet,
    envelope: *const u8,
    envelope_len: usize,
    out_payload: *mut SwarmBuf,
    out_sender: *mut SwarmBuf,
    out_signed: *mut bool,
    out_encrypted: *mut bool,
) -> SwarmStatus {
    guarded(|| {
        let (Some(identity), Some(peers)) = (identity.as_ref(), peers.as_ref()) else {
            return fail(SwarmStatus::NullArgument, "null identity or peer set");
        };
        let Some(envelope) = slice_arg(envelope, envelope_len) else {
            return fail(SwarmStatus::NullArgument, "null envelope");
        };
        if out_payload.is_null() || out_sender.is_null() {
            return fail(SwarmStatus::NullArgument, "null out buffer");
        }
        match diotcomm::open(&identity.0, &peers.0, envelope) {
            Ok(opened) => {
                write_buf(out_payload, opened.payload);
                write_buf(out_sender, opened.sender.to_string().into_bytes());
                if !out_signed.is_null() {
                    out_signed.write(opened.signed);
                }
                if !out_encrypted.is_null() {
                    out_encrypted.write(opened.encrypted);
                }
                SwarmStatus::Ok
            }
            Err(e) => envelope_failure(e),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CString;

    struct Handles {
        identity: *mut SwarmIdentity,
        peers: *mut SwarmPeerSet,
    }

    impl Drop for Handles {
        fn drop(&mut self) {
            unsafe {
                swarm_identity_free(self.identity);
                swarm_peer_set_free(self.peers);
            }
        }
    }

    fn fresh(endpoint: &str) -> Handles {
        let url = CString::new(endpoint).unwrap();
        let mut identity = ptr::null_mut();
        let mut peers = ptr::null_mut();
        unsafe {
            assert_eq!(
                swarm_identity_generate(url.as_ptr(), &mut identity),
                SwarmStatus::Ok
            );
            assert_eq!(swarm_peer_set_new(&mut peers), SwarmStatus::Ok);
        }
        Handles { identity, peers }
    }

    fn take(buf: SwarmBuf) -> Vec<u8> {
        let bytes = unsafe { std::slice::from_raw_parts(buf.data, buf.len) }.to_vec();
        unsafe { swarm_buf_free(buf) };
        bytes
    }

    fn empty_buf() -> SwarmBuf {
        SwarmBuf { data: ptr::null_mut(), len: 0 }
    }

    fn document_of(handles: &Handles, format: SwarmFormat) -> Vec<u8> {
        let mut buf = empty_buf();
        unsafe {
            assert_eq!(
                swarm_identity_document(handles.identity, format, &mut buf),
                SwarmStatus::Ok
            );
        }
        take(buf)
    }

    fn know(handles: &Handles, doc: &[u8], format: SwarmFormat) {
        unsafe {
            assert_eq!(
                swarm_peer_set_add(handles.peers, doc.as_ptr(), doc.len(), format),
                SwarmStatus::Ok
            );
        }
    }

    #[test]
    fn identity_reports_its_did_and_document() {
        let alice = fresh("https://alice.example/dev");
        let mut buf = empty_buf();
        unsafe {
            assert_eq!(swarm_identity_did(alice.identity, &mut buf), SwarmStatus::Ok);
        }
        let did = String::from_utf8(take(buf)).unwrap();
        assert!(did.starts_with("did:sw:"));

        let json = document_of(&alice, SwarmFormat::Json);
        assert!(String::from_utf8(json).unwrap().contains(&did));
    }

    #[test]
    fn sign_verify_round_trip_and_unknown_sender() {
        let alice = fresh("https://alice.example/dev");
        let bob = fresh("https://bob.example/dev");
        let doc = document_of(&alice, SwarmFormat::CborDi);
        know(&bob, &doc, SwarmFormat::CborDi);

        let payload = b"reading 417";
        let mut envelope = empty_buf();
        unsafe {
            assert_eq!(
                swarm_sign(alice.identity, payload.as_ptr(), payload.len(), &mut envelope),
                SwarmStatus::Ok
            );
        }
        let envelope = take(envelope);

        let (mut got, mut sender) = (empty_buf(), empty_buf());
        unsafe {
            assert_eq!(
                swarm_verify(bob.peers, envelope.as_ptr(), envelope.len(), &mut got, &mut sender),
                SwarmStatus::Ok
            );
        }
        assert_eq!(take(got), payload);
        assert!(String::from_utf8(take(sender)).unwrap().starts_with("did:sw:"));

        // An empty peer set cannot authenticate the envelope.
        let carol = fresh("https://carol.example/dev");
        let (mut got, mut sender) = (empty_buf(), empty_buf());
        let status = unsafe {
            swarm_verify(carol.peers, envelope.as_ptr(), envelope.len(), &mut got, &mut sender)
        };
        assert_eq!(status, SwarmStatus::UnknownSender);
        let message = unsafe { CStr::from_ptr(swarm_last_error()) };
        assert!(!message.to_bytes().is_empty());
    }

    #[test]
    fn open_reports_protections_and_rejects_tampering() {
        let alice = fresh("https://alice.example/dev");
        let bob = fresh("https://bob.example/dev");
        let alice_doc = document_of(&alice, SwarmFormat::Json);
        let bob_doc = document_of(&bob, SwarmFormat::Json);
        know(&bob, &alice_doc, SwarmFormat::Json);

        let payload = b"over the wall";
        let mut envelope = empty_buf();
        unsafe {
            assert_eq!(
                swarm_sign_encrypt(
                    alice.identity,
                    bob_doc.as_ptr(),
                    bob_doc.len(),
                    SwarmFormat::Json,
                    payload.as_ptr(),
                    payload.len(),
                    &mut envelope,
                ),
                SwarmStatus::Ok
            );
        }
        let envelope = take(envelope);

        let (mut got, mut sender) = (empty_buf(), empty_buf());
        let (mut signed, mut encrypted) = (false, false);
        unsafe {
            assert_eq!(
                swarm_open(
                    bob.identity,
                    bob.peers,
                    envelope.as_ptr(),
                    envelope.len(),
                    &mut got,
                    &mut sender,
                    &mut signed,
                    &mut encrypted,
                ),
                SwarmStatus::Ok
            );
        }
        assert_eq!(take(got), payload);
        take(sender);
        assert!(signed && encrypted);

        let mut broken = envelope.clone();
        let last = broken.len() - 1;
        broken[last] ^= 1;
        let (mut got, mut sender) = (empty_buf(), empty_buf());
        let status = unsafe {
            swarm_open(
                bob.identity,
                bob.peers,
                broken.as_ptr(),
                broken.len(),
                &mut got,
                &mut sender,
                ptr::null_mut(),
                ptr::null_mut(),
            )
        };
        assert_eq!(status, SwarmStatus::Crypto);
    }

    #[test]
    fn encrypt_decrypt_round_trip() {
        let alice = fresh("https://alice.example/dev");
        let bob = fresh("https://bob.example/dev");
        let alice_doc = document_of(&alice, SwarmFormat::CborDi);
        let bob_doc = document_of(&bob, SwarmFormat::CborDi);
        know(&bob, &alice_doc, SwarmFormat::CborDi);

        let payload = b"\x00binary\xff";
        let mut envelope = empty_buf();
        unsafe {
            assert_eq!(
                swarm_encrypt(
                    alice.identity,
                    bob_doc.as_ptr(),
                    bob_doc.len(),
                    SwarmFormat::CborDi,
                    payload.as_ptr(),
                    payload.len(),
                    &mut envelope,
                ),
                SwarmStatus::Ok
            );
        }
        let envelope = take(envelope);
        let (mut got, mut sender) = (empty_buf(), empty_buf());
        unsafe {
            assert_eq!(
                swarm_decrypt(
                    bob.identity,
                    bob.peers,
                    envelope.as_ptr(),
                    envelope.len(),
                    &mut got,
                    &mut sender,
                ),
                SwarmStatus::Ok
            );
        }
        assert_eq!(take(got), payload);
        take(sender);
    }

    #[test]
    fn bad_inputs_are_status_codes_not_crashes() {
        let alice = fresh("https://alice.example/dev");
        let mut out = empty_buf();
        unsafe {
            assert_eq!(
                swarm_identity_did(ptr::null(), &mut out),
                SwarmStatus::NullArgument
            );
            assert_eq!(
                swarm_sign(alice.identity, ptr::null(), 3, &mut out),
                SwarmStatus::NullArgument
            );
            let junk = b"not an envelope";
            let (mut p, mut s) = (empty_buf(), empty_buf());
            assert_eq!(
                swarm_verify(alice.peers, junk.as_ptr(), junk.len(), &mut p, &mut s),
                SwarmStatus::Decode
            );
            assert_eq!(
                swarm_document_convert(junk.as_ptr(), junk.len(), SwarmFormat::Json,
                                       SwarmFormat::CborDi, &mut out),
                SwarmStatus::Decode
            );
            // Freeing an empty buffer and null handles is allowed.
            swarm_buf_free(empty_buf());
            swarm_identity_free(ptr::null_mut());
            swarm_peer_set_free(ptr::null_mut());
        }
    }

    #[test]
    fn generated_header_declares_the_surface() {
        let header = std::fs::read_to_string(
            std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("include/swarm_ffi.h"),
        )
        .expect("build script wrote the header");
        for symbol in [
            "SWARM_FFI_H",
            "SwarmStatus",
            "SwarmBuf",
            "swarm_identity_generate",
            "swarm_peer_set_add",
            "swarm_sign_encrypt",
            "swarm_open",
            "swarm_last_error",
            "swarm_buf_free",
        ] {
            assert!(header.contains(symbol), "header is missing {symbol}");
        }
    }
}
