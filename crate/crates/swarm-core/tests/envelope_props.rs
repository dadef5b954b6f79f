//! Property tests for both envelope stacks: round-trips across every mode,
//! tamper rejection down to single bits, nonce freshness, and the
//! receiver-anonymity guarantee of the compact encryption layout.

use proptest::prelude::*;
use rand::{CryptoRng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use std::collections::{HashMap, HashSet};
use std::sync::OnceLock;
use swarm_core::cbor::Value;
use swarm_core::document::DidDocument;
use swarm_core::{diotcomm, jose, AgentIdentity, SwarmDid};

struct Fixture {
    alice: AgentIdentity,
    bob: AgentIdentity,
    eve: AgentIdentity,
    resolver: HashMap<SwarmDid, DidDocument>,
}

fn fx() -> &'static Fixture {
    static FIXTURE: OnceLock<Fixture> = OnceLock::new();
    FIXTURE.get_or_init(|| {
        let mut rng = ChaCha20Rng::seed_from_u64(0x5eed);
        let alice = AgentIdentity::generate("https://alice.example/a", &mut rng).unwrap();
        let bob = AgentIdentity::generate("https://bob.example/b", &mut rng).unwrap();
        let eve = AgentIdentity::generate("https://eve.example/e", &mut rng).unwrap();
        let resolver = [
            (*alice.did(), alice.document().clone()),
            (*bob.did(), bob.document().clone()),
            (*eve.did(), eve.document().clone()),
        ]
        .into();
        Fixture { alice, bob, eve, resolver }
    })
}

const MODES: usize = 6;

fn wrap<R: CryptoRng + ?Sized>(mode: usize, payload: &[u8], rng: &mut R) -> Vec<u8> {
    let f = fx();
    match mode {
        0 => diotcomm::sign(&f.alice, payload),
        1 => diotcomm::encrypt(&f.alice, f.bob.document(), payload, rng).unwrap(),
        2 => diotcomm::sign_encrypt(&f.alice, f.bob.document(), payload, rng).unwrap(),
        3 => jose::sign(&f.alice, payload),
        4 => jose::encrypt(&f.alice, f.bob.document(), payload, rng).unwrap(),
        _ => jose::sign_encrypt(&f.alice, f.bob.document(), payload, rng).unwrap(),
    }
}

fn unwrap_as(receiver: &AgentIdentity, mode: usize, envelope: &[u8]) -> Result<Vec<u8>, String> {
    let f = fx();
    if mode < 3 {
        diotcomm::open(receiver, &f.resolver, envelope)
            .map(|m| m.payload)
            .map_err(|e| e.to_string())
    } else {
        jose::open(receiver, &f.resolver, envelope)
            .map(|m| m.payload)
            .map_err(|e| e.to_string())
    }
}

proptest! {
    #[test]
    fn every_mode_round_trips(
        payload in prop::collection::vec(any::<u8>(), 0..600),
        seed in any::<u64>(),
    ) {
        let f = fx();
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        for mode in 0..MODES {
            let envelope = wrap(mode, &payload, &mut rng);
            let opened = if mode < 3 {
                diotcomm::open(&f.bob, &f.resolver, &envelope).unwrap()
            } else {
                jose::open(&f.bob, &f.resolver, &envelope).unwrap()
            };
            prop_assert_eq!(&opened.payload, &payload);
            prop_assert_eq!(opened.sender, *f.alice.did());
            prop_assert_eq!(opened.signed, mode % 3 != 1);
            prop_assert_eq!(opened.encrypted, mode % 3 != 0);
        }
    }

    #[test]
    fn one_flipped_bit_spoils_any_envelope(
        payload in prop::collection::vec(any::<u8>(), 0..200),
        seed in any::<u64>(),
        mode in 0..MODES,
        bit in any::<prop::sample::Index>(),
    ) {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let mut envelope = wrap(mode, &payload, &mut rng);
        let bit = bit.index(envelope.len() * 8);
        envelope[bit / 8] ^= 1 << (bit % 8);
        prop_assert!(unwrap_as(&fx().bob, mode, &envelope).is_err());
    }

    #[test]
    fn third_parties_and_prefixes_always_fail(
        payload in prop::collection::vec(any::<u8>(), 0..200),
        seed in any::<u64>(),
        cut in any::<prop::sample::Index>(),
    ) {
        let f = fx();
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        for mode in [1, 2, 4, 5] {
            let envelope = wrap(mode, &payload, &mut rng);
            prop_assert!(unwrap_as(&f.eve, mode, &envelope).is_err());
            let cut = cut.index(envelope.len());
            prop_assert!(unwrap_as(&f.bob, mode, &envelope[..cut]).is_err());
        }
    }
}

#[test]
fn every_single_bit_flip_is_rejected_exhaustively() {
    let f = fx();
    let mut rng = ChaCha20Rng::seed_from_u64(9);
    for mode in 0..3 {
        let envelope = wrap(mode, b"x", &mut rng);
        for bit in 0..envelope.len() * 8 {
            let mut broken = envelope.clone();
            broken[bit / 8] ^= 1 << (bit % 8);
            assert!(
                unwrap_as(&f.bob, mode, &broken).is_err(),
                "mode {mode}: flip of bit {bit} accepted"
            );
        }
    }
}

#[test]
fn nonces_never_repeat_across_ten_thousand_envelopes() {
    let f = fx();
    let mut rng = ChaCha20Rng::seed_from_u64(10);
    let mut nonces = HashSet::new();
    for _ in 0..10_000 {
        let envelope = diotcomm::encrypt(&f.alice, f.bob.document(), b"tick", &mut rng).unwrap();
        let Value::Tag(16, body) = Value::from_bytes(&envelope).unwrap() else {
            panic!("not an encryption envelope")
        };
        let nonce = body.as_array().unwrap()[1]
            .map_get_int(5)
            .and_then(Value::as_bytes)
            .unwrap()
            .to_vec();
        assert_eq!(nonce.len(), diotcomm::NONCE_LEN);
        assert!(nonces.insert(nonce), "nonce repeated");
    }
}

#[test]
fn wire_never_names_the_receiver() {
    let mut rng = ChaCha20Rng::seed_from_u64(11);
    let sender = AgentIdentity::generate("https://s.example/x", &mut rng).unwrap();
    for _ in 0..64 {
        let receiver = AgentIdentity::generate("https://r.example/y", &mut rng).unwrap();
        for envelope in [
            diotcomm::encrypt(&sender, receiver.document(), b"ping", &mut rng).unwrap(),
            diotcomm::sign_encrypt(&sender, receiver.document(), b"ping", &mut rng).unwrap(),
        ] {
            let nsi = receiver.did().nsi();
            assert!(!envelope.windows(nsi.len()).any(|w| w == nsi));
            let text = receiver.did().to_string();
            assert!(!envelope.windows(text.len()).any(|w| w == text.as_bytes()));
        }
    }
}

#[test]
fn stacks_reject_each_others_envelopes() {
    let f = fx();
    let mut rng = ChaCha20Rng::seed_from_u64(12);
    let compact = diotcomm::sign_encrypt(&f.alice, f.bob.document(), b"m", &mut rng).unwrap();
    let baseline = jose::sign_encrypt(&f.alice, f.bob.document(), b"m", &mut rng).unwrap();
    assert!(jose::open(&f.bob, &f.resolver, &compact).is_err());
    assert!(diotcomm::open(&f.bob, &f.resolver, &baseline).is_err());
}
