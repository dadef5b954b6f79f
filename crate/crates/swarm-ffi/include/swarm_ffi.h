#ifndef SWARM_FFI_H
#define SWARM_FFI_H

/* Generated by cbindgen from the swarm-ffi crate; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every call.
typedef enum SwarmStatus {
  SWARM_STATUS_OK = 0,
  // A required pointer argument was null.
  SWARM_STATUS_NULL_ARGUMENT = 1,
  // An argument was present but unusable (bad URL, bad format tag, ...).
  SWARM_STATUS_INVALID_ARGUMENT = 2,
  // Input bytes did not parse as a document or envelope.
  SWARM_STATUS_DECODE = 3,
  // Signature verification or decryption failed.
  SWARM_STATUS_CRYPTO = 4,
  // The envelope names a sender the peer set does not contain.
  SWARM_STATUS_UNKNOWN_SENDER = 5,
  // The payload exceeds the envelope size limit.
  SWARM_STATUS_PAYLOAD_TOO_LARGE = 6,
  // A bug tripped internally; the library caught it instead of crashing.
  SWARM_STATUS_INTERNAL = 7,
} SwarmStatus;

// Document serialization selector.
typedef enum SwarmFormat {
  SWARM_FORMAT_JSON = 0,
  SWARM_FORMAT_CBOR = 1,
  SWARM_FORMAT_CBOR_DI = 2,
} SwarmFormat;

// An agent identity: document plus private keys. Opaque.
typedef struct SwarmIdentity SwarmIdentity;

// A set of known peer documents used to authenticate senders. Opaque.
typedef struct SwarmPeerSet SwarmPeerSet;

// An owned byte buffer handed out by the library.
typedef struct SwarmBuf {
  uint8_t *data;
  uintptr_t len;
} SwarmBuf;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on this thread. Never null; empty
// before the first failure. Valid until the next failure on this thread.
const char *swarm_last_error(void);

// Releases a buffer returned by the library. Null `data` is a no-op.
void swarm_buf_free(struct SwarmBuf buf);

// Generates a fresh identity whose document advertises `endpoint_url`.
enum SwarmStatus swarm_identity_generate(const char *endpoint_url, struct SwarmIdentity **out);

void swarm_identity_free(struct SwarmIdentity *identity);

// Writes the identity's DID in text form (no trailing NUL).
enum SwarmStatus swarm_identity_did(const struct SwarmIdentity *identity, struct SwarmBuf *out);

// Serializes the identity's document in the requested format.
enum SwarmStatus swarm_identity_document(const struct SwarmIdentity *identity,
                                         enum SwarmFormat format,
                                         struct SwarmBuf *out);

// Re-serializes an encoded document into another format.
enum SwarmStatus swarm_document_convert(const uint8_t *doc,
                                        uintptr_t doc_len,
                                        enum SwarmFormat from,
                                        enum SwarmFormat to,
                                        struct SwarmBuf *out);

enum SwarmStatus swarm_peer_set_new(struct SwarmPeerSet **out);

void swarm_peer_set_free(struct SwarmPeerSet *peers);

// Adds (or replaces) a peer document, keyed by the DID it declares.
enum SwarmStatus swarm_peer_set_add(struct SwarmPeerSet *peers,
                                    const uint8_t *doc,
                                    uintptr_t doc_len,
                                    enum SwarmFormat format);

// Signs `payload`, producing a compact signed envelope.
enum SwarmStatus swarm_sign(const struct SwarmIdentity *identity,
                            const uint8_t *payload,
                            uintptr_t payload_len,
                            struct SwarmBuf *out);

// Verifies a signed envelope against the peer set. On success writes the
// payload and the sender's DID text.
enum SwarmStatus swarm_verify(const struct SwarmPeerSet *peers,
                              const uint8_t *envelope,
                              uintptr_t envelope_len,
                              struct SwarmBuf *out_payload,
                              struct SwarmBuf *out_sender);

// Encrypts `payload` to the receiver described by an encoded document.
enum SwarmStatus swarm_encrypt(const struct SwarmIdentity *identity,
                               const uint8_t *receiver_doc,
                               uintptr_t receiver_doc_len,
                               enum SwarmFormat receiver_format,
                               const uint8_t *payload,
                               uintptr_t payload_len,
                               struct SwarmBuf *out);

// Decrypts an envelope addressed to `identity`, authenticating the sender
// against the peer set.
enum SwarmStatus swarm_decrypt(const struct SwarmIdentity *identity,
                               const struct SwarmPeerSet *peers,
                               const uint8_t *envelope,
                               uintptr_t envelope_len,
                               struct SwarmBuf *out_payload,
                               struct SwarmBuf *out_sender);

// Signs then encrypts, binding the signature to the encryption sender.
enum SwarmStatus swarm_sign_encrypt(const struct SwarmIdentity *identity,
                                    const uint8_t *receiver_doc,
                                    uintptr_t receiver_doc_len,
                                    enum SwarmFormat receiver_format,
                                    const uint8_t *payload,
                                    uintptr_t payload_len,
                                    struct SwarmBuf *out);

// Opens any compact envelope: verifies, decrypts, or both. `out_signed`
// and `out_encrypted` report which protections were present; either may
// be null if the caller does not care.
enum SwarmStatus swarm_open(const struct SwarmIdentity *identity,
                            const struct SwarmPeerSet *peers,
                            const uint8_t *envelope,
                            uintptr_t envelope_len,
                            struct SwarmBuf *out_payload,
                            struct SwarmBuf *out_sender,
                            bool *out_signed,
                            bool *out_encrypted);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SWARM_FFI_H */
