use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// A seed bit-string, written as hex. Bit `j` is bit `7 - j % 8` of byte `j / 8`.
#[derive(Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Seed(Vec<u8>);

impl Seed {
    pub fn from_bytes(bytes: impl Into<Vec<u8>>) -> Self {
        Seed(bytes.into())
    }

    pub fn from_hex(s: &str) -> Result<Self> {
        let s = s.trim();
        let s = s.strip_prefix("0x").unwrap_or(s);
        if s.is_empty() {
            return Err(Error::InvalidSeed("empty seed".into()));
        }
        hex::decode(s)
            .map(Seed)
            .map_err(|e| Error::InvalidSeed(format!("{s:?}: {e}")))
    }

    /// Eight big-endian bytes.
    pub fn from_u64(value: u64) -> Self {
        Seed(value.to_be_bytes().to_vec())
    }

    pub fn to_hex(&self) -> String {
        hex::encode(&self.0)
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn bit_len(&self) -> usize {
        8 * self.0.len()
    }

    pub fn bit(&self, j: usize) -> bool {
        (self.0[j / 8] >> (7 - j % 8)) & 1 == 1
    }

    /// `len <= 64` bits starting at `start`, first bit most significant.
    pub fn bits(&self, start: usize, len: usize) -> u64 {
        debug_assert!(len <= 64 && start + len <= self.bit_len());
        (start..start + len).fold(0u64, |acc, j| (acc << 1) | u64::from(self.bit(j)))
    }

    /// A 256-bit child seed bound to `tag` and `index`.
    pub fn derive(&self, tag: &str, index: u64) -> Seed {
        let mut h = Sha256::new();
        h.update((self.0.len() as u64).to_be_bytes());
        h.update(&self.0);
        h.update((tag.len() as u64).to_be_bytes());
        h.update(tag.as_bytes());
        h.update(index.to_be_bytes());
        Seed(h.finalize().to_vec())
    }

    /// 32 bytes suitable for keying a ChaCha stream.
    pub fn key(&self, tag: &str) -> [u8; 32] {
        let mut out = [0u8; 32];
        out.copy_from_slice(self.derive(tag, 0).as_bytes());
        out
    }
}

impl fmt::Debug for Seed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Seed({})", self.to_hex())
    }
}

impl fmt::Display for Seed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl FromStr for Seed {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Seed::from_hex(s)
    }
}

impl TryFrom<String> for Seed {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        Seed::from_hex(&s)
    }
}

impl From<Seed> for String {
    fn from(s: Seed) -> String {
        s.to_hex()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hex_round_trip_and_bits() {
        let s = Seed::from_hex("0xA5ff").unwrap();
        assert_eq!(s.to_hex(), "a5ff");
        assert_eq!(s.bit_len(), 16);
        assert!(s.bit(0) && !s.bit(1) && s.bit(2));
        assert_eq!(s.bits(0, 8), 0xa5);
        assert_eq!(s.bits(4, 8), 0x5f);
        assert!(Seed::from_hex("xyz").is_err());
        assert!(Seed::from_hex("").is_err());
        assert!(Seed::from_hex("abc").is_err());
    }

    #[test]
    fn derive_separates_tags() {
        let s = Seed::from_u64(7);
        assert_ne!(s.derive("a", 0), s.derive("a", 1));
        assert_ne!(s.derive("a", 0), s.derive("b", 0));
        assert_eq!(s.derive("a", 3), s.derive("a", 3));
        assert_eq!(s.derive("a", 0).bit_len(), 256);
    }
}
