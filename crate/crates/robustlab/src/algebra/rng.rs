//! Hierarchical deterministic randomness.
//!
//! A stream is a 256-bit seed; children are derived by hashing the seed
//! with a label (and optional index). The same (seed, path) always yields
//! the same byte stream, and distinct paths yield independent streams, so
//! trials can be farmed out to workers in any order without changing any
//! experiment outcome.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RngStream {
    seed: [u8; 32],
}

impl RngStream {
    pub fn from_seed_u64(seed: u64) -> Self {
        let mut h = Sha256::new();
        h.update(b"robustlab.seed.v1");
        h.update(seed.to_le_bytes());
        RngStream { seed: h.finalize().into() }
    }

    pub fn from_seed_bytes(bytes: &[u8]) -> Self {
        let mut h = Sha256::new();
        h.update(b"robustlab.seedbytes.v1");
        h.update((bytes.len() as u64).to_le_bytes());
        h.update(bytes);
        RngStream { seed: h.finalize().into() }
    }

    /// Derive the child stream named by `label`.
    pub fn derive(&self, label: &str) -> RngStream {
        let mut h = Sha256::new();
        h.update(self.seed);
        h.update((label.len() as u64).to_le_bytes());
        h.update(label.as_bytes());
        RngStream { seed: h.finalize().into() }
    }

    /// Derive the `index`-th child stream under `label`.
    pub fn derive_index(&self, label: &str, index: u64) -> RngStream {
        let mut h = Sha256::new();
        h.update(self.seed);
        h.update((label.len() as u64).to_le_bytes());
        h.update(label.as_bytes());
        h.update(index.to_le_bytes());
        RngStream { seed: h.finalize().into() }
    }

    /// Instantiate the actual generator for this stream.
    pub fn rng(&self) -> ChaCha20Rng {
        ChaCha20Rng::from_seed(self.seed)
    }

    /// Short hex fingerprint for report files.
    pub fn fingerprint(&self) -> String {
        hex::encode(&self.seed[..8])
    }

    /// Raw 32-byte state, for serializing derived secrets.
    pub fn to_hex(&self) -> String {
        hex::encode(self.seed)
    }

    pub fn from_hex(s: &str) -> crate::error::Result<Self> {
        let bytes = hex::decode(s).map_err(|e| crate::error::Error::Parse(e.to_string()))?;
        let seed: [u8; 32] = bytes
            .try_into()
            .map_err(|_| crate::error::Error::Parse("seed must be 32 bytes".into()))?;
        Ok(RngStream { seed })
    }
}
