//! Key material: Curve25519 keypairs and derived key identifiers.
//!
//! Verification keys are Ed25519, agreement keys are X25519; both expose a
//! 32-byte public value. A key's identifier is not chosen, it is computed:
//! the first 8 bytes of SHA-256 over the public key. That keeps identifiers
//! collision-resistant in practice, lets any holder of the public key check
//! them, and means compact documents never need to carry them at all.

use ed25519_dalek::SigningKey;
use rand::CryptoRng;
use sha2::{Digest, Sha256};
use x25519_dalek::{PublicKey as XPublicKey, StaticSecret};

pub const KEY_ID_LEN: usize = 8;
pub const PUBLIC_KEY_LEN: usize = 32;
pub const SECRET_KEY_LEN: usize = 32;

pub type KeyId = [u8; KEY_ID_LEN];

/// First 8 bytes of SHA-256 over the 32-byte public key.
pub fn derive_key_id(public_key: &[u8; PUBLIC_KEY_LEN]) -> KeyId {
    let digest = Sha256::digest(public_key);
    digest[..KEY_ID_LEN].try_into().unwrap()
}

/// What a key is for. The curve is implied: verification keys are Ed25519,
/// agreement keys are X25519. Keeping the pairing structural means a
/// document can never claim an Ed25519 key for agreement or vice versa.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KeyRole {
    Verification,
    Agreement,
}

impl KeyRole {
    pub fn curve(self) -> Curve {
        match self {
            KeyRole::Verification => Curve::Ed25519,
            KeyRole::Agreement => Curve::X25519,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Curve {
    Ed25519,
    X25519,
}

impl Curve {
    /// COSE elliptic-curve registry value.
    pub fn cose_label(self) -> i64 {
        match self {
            Curve::Ed25519 => 6,
            Curve::X25519 => 4,
        }
    }

    pub fn from_cose_label(label: i64) -> Option<Curve> {
        match label {
            6 => Some(Curve::Ed25519),
            4 => Some(Curve::X25519),
            _ => None,
        }
    }

    pub fn role(self) -> KeyRole {
        match self {
            Curve::Ed25519 => KeyRole::Verification,
            Curve::X25519 => KeyRole::Agreement,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KeyError {
    #[error("public key must be {PUBLIC_KEY_LEN} bytes, got {0}")]
    WrongKeyLength(usize),
    #[error("key id must be {KEY_ID_LEN} bytes, got {0}")]
    WrongKeyIdLength(usize),
    #[error("key id does not match the key it claims to identify")]
    KeyIdMismatch,
    #[error("stored secret does not reproduce the published public key")]
    SecretMismatch,
}

/// A public key as it appears in a DDo: role, value and derived id.
///
/// `key_id` is always `derive_key_id(public_key)`; the constructors uphold
/// that, so a value of this type is proof the pair is consistent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PublicKeyEntry {
    role: KeyRole,
    public_key: [u8; PUBLIC_KEY_LEN],
    key_id: KeyId,
}

impl PublicKeyEntry {
    pub fn new(role: KeyRole, public_key: [u8; PUBLIC_KEY_LEN]) -> Self {
        PublicKeyEntry {
            role,
            public_key,
            key_id: derive_key_id(&public_key),
        }
    }

    /// Rebuilds an entry from wire data, checking the transported id.
    pub fn from_wire(
        role: KeyRole,
        public_key: &[u8],
        claimed_key_id: Option<&[u8]>,
    ) -> Result<Self, KeyError> {
        let public_key: [u8; PUBLIC_KEY_LEN] = public_key
            .try_into()
            .map_err(|_| KeyError::WrongKeyLength(public_key.len()))?;
        let entry = Self::new(role, public_key);
        if let Some(claimed) = claimed_key_id {
            let claimed: KeyId = claimed
                .try_into()
                .map_err(|_| KeyError::WrongKeyIdLength(claimed.len()))?;
            if claimed != entry.key_id {
                return Err(KeyError::KeyIdMismatch);
            }
        }
        Ok(entry)
    }

    pub fn role(&self) -> KeyRole {
        self.role
    }

    pub fn curve(&self) -> Curve {
        self.role.curve()
    }

    pub fn public_key(&self) -> &[u8; PUBLIC_KEY_LEN] {
        &self.public_key
    }

    pub fn key_id(&self) -> &KeyId {
        &self.key_id
    }

    pub fn key_id_base58(&self) -> String {
        bs58::encode(&self.key_id).into_string()
    }
}

/// Generates a fresh keypair for `role`, returning the public entry and the
/// 32-byte secret. Ed25519 secrets are the RFC 8032 seed; X25519 secrets
/// are stored pre-clamped (clamping is idempotent, so the stored bytes feed
/// straight into the scalar multiplication).
pub fn generate_keypair<R: CryptoRng + ?Sized>(
    role: KeyRole,
    rng: &mut R,
) -> (PublicKeyEntry, [u8; SECRET_KEY_LEN]) {
    let mut secret = [0u8; SECRET_KEY_LEN];
    rng.fill_bytes(&mut secret);
    match role {
        KeyRole::Verification => {
            let public = SigningKey::from_bytes(&secret).verifying_key().to_bytes();
            (PublicKeyEntry::new(role, public), secret)
        }
        KeyRole::Agreement => {
            secret = clamp_scalar(secret);
            let public = *XPublicKey::from(&StaticSecret::from(secret)).as_bytes();
            (PublicKeyEntry::new(role, public), secret)
        }
    }
}

/// Recomputes the public key for a stored secret; used to cross-check
/// loaded identities against their published documents.
pub fn public_from_secret(role: KeyRole, secret: &[u8; SECRET_KEY_LEN]) -> [u8; PUBLIC_KEY_LEN] {
    match role {
        KeyRole::Verification => SigningKey::from_bytes(secret).verifying_key().to_bytes(),
        KeyRole::Agreement => *XPublicKey::from(&StaticSecret::from(*secret)).as_bytes(),
    }
}

/// RFC 7748 scalar clamping.
pub fn clamp_scalar(mut s: [u8; 32]) -> [u8; 32] {
    s[0] &= 248;
    s[31] &= 127;
    s[31] |= 64;
    s
}
