//! Helpers shared by the integration tests. Not every test file uses
//! every helper.
#![allow(dead_code)]

use rand::{CryptoRng, RngExt};
use std::net::SocketAddr;
use std::sync::Arc;
use swarm_core::document::{DidDocument, ServiceEndpoint};
use swarm_core::keys::{KeyRole, PublicKeyEntry};
use swarm_core::registry::{RecordStore, RegistryService};
use swarm_core::SwarmDid;

/// A structurally random document: fresh NSI, 1..=3 keys per role, 1..=3
/// endpoints with a random sprinkle of metadata. Key bytes are random, not
/// curve points; the codecs only care about lengths.
pub fn random_document<R: CryptoRng + ?Sized>(rng: &mut R) -> DidDocument {
    let mut nsi = [0u8; 16];
    rng.fill_bytes(&mut nsi);
    let did = SwarmDid::new(nsi);

    let keys = |rng: &mut R, role: KeyRole| {
        (0..rng.random_range(1..=3usize))
            .map(|_| {
                let mut pk = [0u8; 32];
                rng.fill_bytes(&mut pk);
                PublicKeyEntry::new(role, pk)
            })
            .collect::<Vec<_>>()
    };
    let verification = keys(rng, KeyRole::Verification);
    let agreement = keys(rng, KeyRole::Agreement);

    let endpoints = (0..rng.random_range(1..=3usize))
        .map(|i| {
            let host: String = (0..rng.random_range(1..=12usize))
                .map(|_| rng.random_range(b'a'..=b'z') as char)
                .collect();
            let url = format!("https://{host}.example/a{i}");
            if rng.random_bool(0.5) {
                ServiceEndpoint::with_metadata(
                    &url,
                    rng.random_bool(0.5).then(|| format!("#svc{i}")),
                    rng.random_bool(0.5).then(|| "PeerMessaging".to_string()),
                )
                .unwrap()
            } else {
                ServiceEndpoint::new(&url).unwrap()
            }
        })
        .collect();

    DidDocument::new(did, verification, agreement, endpoints).unwrap()
}

/// Serve a registry on an ephemeral loopback port. The returned runtime
/// keeps the server alive; drop it to shut everything down.
pub fn spawn_registry(store: Arc<dyn RecordStore>) -> (tokio::runtime::Runtime, SocketAddr) {
    let runtime = tokio::runtime::Runtime::new().unwrap();
    let listener = runtime
        .block_on(tokio::net::TcpListener::bind("127.0.0.1:0"))
        .unwrap();
    let addr = listener.local_addr().unwrap();
    let router = swarm_core::registry::router(RegistryService::new(store));
    runtime.spawn(async move {
        axum::serve(listener, router).await.unwrap();
    });
    (runtime, addr)
}
