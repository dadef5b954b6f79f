//! `did:sw` identifiers.
//!
//! The namespace-specific identifier (NSI) is 16 random bytes. The text form
//! is `did:sw:` followed by the Base58btc encoding of the NSI; the binary
//! form replaces the `did:` prefix with nothing and keeps the method tag, so
//! it is the ASCII bytes `sw:` followed by the 16 raw NSI bytes, always 19
//! bytes, small enough to ride along in every message header.

use rand::CryptoRng;
use std::fmt;
use std::str::FromStr;

pub const NSI_LEN: usize = 16;
pub const TEXT_PREFIX: &str = "did:sw:";
pub const BINARY_PREFIX: &[u8; 3] = b"sw:";
/// `b"sw:"` + 16 NSI bytes.
pub const BINARY_LEN: usize = 19;

/// A `did:sw` identifier. Equality and ordering are on the raw NSI.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SwarmDid([u8; NSI_LEN]);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DidError {
    #[error("not a did:sw identifier: {0:?}")]
    WrongMethod(String),
    #[error("identifier is not valid Base58btc")]
    BadBase58,
    #[error("NSI must be {NSI_LEN} bytes, got {0}")]
    WrongNsiLength(usize),
    #[error("binary DID must be {BINARY_LEN} bytes, got {0}")]
    WrongBinaryLength(usize),
    #[error("binary DID does not start with the `sw:` tag")]
    WrongBinaryTag,
}

impl SwarmDid {
    pub fn new(nsi: [u8; NSI_LEN]) -> Self {
        SwarmDid(nsi)
    }

    /// Draws a fresh NSI from a cryptographically secure generator. The
    /// `CryptoRng` bound is what keeps seeded test generators out of
    /// production call sites that only hand out an `OsRng`.
    pub fn generate<R: CryptoRng + ?Sized>(rng: &mut R) -> Self {
        let mut nsi = [0u8; NSI_LEN];
        rng.fill_bytes(&mut nsi);
        SwarmDid(nsi)
    }

    pub fn nsi(&self) -> &[u8; NSI_LEN] {
        &self.0
    }

    pub fn from_nsi_slice(bytes: &[u8]) -> Result<Self, DidError> {
        let nsi: [u8; NSI_LEN] = bytes
            .try_into()
            .map_err(|_| DidError::WrongNsiLength(bytes.len()))?;
        Ok(SwarmDid(nsi))
    }

    /// 19-byte wire form: `sw:` tag + raw NSI.
    pub fn to_binary(&self) -> [u8; BINARY_LEN] {
        let mut out = [0u8; BINARY_LEN];
        out[..3].copy_from_slice(BINARY_PREFIX);
        out[3..].copy_from_slice(&self.0);
        out
    }

    pub fn from_binary(bytes: &[u8]) -> Result<Self, DidError> {
        if bytes.len() != BINARY_LEN {
            return Err(DidError::WrongBinaryLength(bytes.len()));
        }
        if &bytes[..3] != BINARY_PREFIX {
            return Err(DidError::WrongBinaryTag);
        }
        Self::from_nsi_slice(&bytes[3..])
    }
}

impl fmt::Display for SwarmDid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{TEXT_PREFIX}{}", bs58::encode(&self.0).into_string())
    }
}

impl fmt::Debug for SwarmDid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SwarmDid({self})")
    }
}

impl FromStr for SwarmDid {
    type Err = DidError;

    fn from_str(s: &str) -> Result<Self, DidError> {
        let encoded = s
            .strip_prefix(TEXT_PREFIX)
            .ok_or_else(|| DidError::WrongMethod(s.to_owned()))?;
        let bytes = bs58::decode(encoded)
            .into_vec()
            .map_err(|_| DidError::BadBase58)?;
        Self::from_nsi_slice(&bytes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn text_form_roundtrips() {
        let did = SwarmDid::new(*b"0123456789abcdef");
        let text = did.to_string();
        assert!(text.starts_with("did:sw:"));
        assert_eq!(text.parse::<SwarmDid>().unwrap(), did);
    }

    #[test]
    fn known_identifier_parses_to_sixteen_bytes() {
        let did: SwarmDid = "did:sw:TTbs19FJKYf6jXzS1dbnqe".parse().unwrap();
        assert_eq!(
            did.nsi(),
            &[
                0xd6, 0x44, 0x6d, 0x7f, 0x00, 0x14, 0x19, 0x33, 0xab, 0xf4,
                0xb9, 0x28, 0x0e, 0xa2, 0x12, 0xa9,
            ]
        );
        assert_eq!(did.to_string(), "did:sw:TTbs19FJKYf6jXzS1dbnqe");
    }

    #[test]
    fn all_zero_nsi_renders_as_sixteen_ones() {
        let did = SwarmDid::new([0u8; 16]);
        assert_eq!(did.to_string(), "did:sw:1111111111111111");
        assert_eq!(did.to_string().parse::<SwarmDid>().unwrap(), did);
    }

    #[test]
    fn binary_form_is_nineteen_bytes_and_roundtrips() {
        let mut rng = StdRng::seed_from_u64(7);
        let did = SwarmDid::generate(&mut rng);
        let bin = did.to_binary();
        assert_eq!(bin.len(), 19);
        assert_eq!(&bin[..3], b"sw:");
        assert_eq!(SwarmDid::from_binary(&bin).unwrap(), did);
    }

    #[test]
    fn rejects_wrong_method_and_scheme() {
        for s in ["did:key:z6Mk", "sw:abc", "did:sw", "DID:SW:abc", ""] {
            assert!(matches!(
                s.parse::<SwarmDid>(),
                Err(DidError::WrongMethod(_))
            ));
        }
    }

    #[test]
    fn rejects_bad_base58_symbols() {
        // 0, O, I and l are outside the Base58btc alphabet.
        assert_eq!(
            "did:sw:0OIl".parse::<SwarmDid>().unwrap_err(),
            DidError::BadBase58
        );
    }

    #[test]
    fn rejects_wrong_nsi_lengths() {
        // 17 bytes (0x01..=0x11) and 15 bytes (0x01..=0x0f), pre-encoded.
        assert_eq!(
            "did:sw:YruNJgvoA2CUCpKWeF9512".parse::<SwarmDid>().unwrap_err(),
            DidError::WrongNsiLength(17)
        );
        assert_eq!(
            "did:sw:2drXXUifSrRnXLGbXg8E".parse::<SwarmDid>().unwrap_err(),
            DidError::WrongNsiLength(15)
        );
    }

    #[test]
    fn rejects_binary_forms_with_wrong_tag_or_length() {
        let did = SwarmDid::new([7u8; 16]);
        let bin = did.to_binary();
        assert_eq!(
            SwarmDid::from_binary(&bin[..18]).unwrap_err(),
            DidError::WrongBinaryLength(18)
        );
        let mut wrong = bin;
        wrong[0] = b'x';
        assert_eq!(
            SwarmDid::from_binary(&wrong).unwrap_err(),
            DidError::WrongBinaryTag
        );
    }
}
