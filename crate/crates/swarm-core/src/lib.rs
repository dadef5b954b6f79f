//! Self-sovereign identity for constrained devices.
//!
//! This crate implements the `did:sw` method end to end:
//!
//! * [`did`]: 16-byte identifiers with a 19-byte binary form.
//! * [`keys`] / [`document`]: Curve25519 key material, derived key ids and
//!   validated DID documents (DDos).
//! * [`codec`]: three DDo serializations: DID-Core JSON, its mechanical
//!   CBOR twin, and the compact COSE-keyed array that fits a LoRa frame.
//! * [`diotcomm`]: signed / encrypted / signed-then-encrypted COSE
//!   envelopes whose only routable header is the sender id.
//! * [`jose`]: the JOSE/JWM equivalent of the same operations, used as the
//!   size baseline.
//! * [`registry`]: an HTTP registry that admits self-signed DDos and
//!   resolves them in any supported format.
//! * [`agentstore`] / [`client`] / [`bench`]: agent-side persistence, the
//!   registry client, and the size benchmark behind `swarm-agent bench`.
//!
//! ```
//! use swarm_core::document::AgentIdentity;
//!
//! let mut rng = rand::rng();
//! let alice = AgentIdentity::generate("https://alice.example/ep", &mut rng).unwrap();
//! let bob = AgentIdentity::generate("https://bob.example/ep", &mut rng).unwrap();
//!
//! let mut peers = std::collections::HashMap::new();
//! peers.insert(*alice.did(), alice.document().clone());
//!
//! let env = swarm_core::diotcomm::sign_encrypt(&alice, bob.document(), b"21C", &mut rng).unwrap();
//! let opened = swarm_core::diotcomm::open(&bob, &peers, &env).unwrap();
//! assert_eq!(opened.payload, b"21C");
//! assert_eq!(opened.sender, *alice.did());
//! ```

pub mod bench;
pub mod cbor;
pub mod client;
pub mod codec;
pub mod did;
pub mod diotcomm;
pub mod document;
pub mod jose;
pub mod keys;
pub mod reference;
pub mod registry;
pub mod agentstore;

pub use did::SwarmDid;
pub use document::{AgentIdentity, DidDocument, ServiceEndpoint};
pub use keys::{derive_key_id, KeyRole, PublicKeyEntry};
