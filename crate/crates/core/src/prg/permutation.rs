use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use super::seed::Seed;
use crate::error::{Error, Result};

/// A bijection on `0..domain()` with random access in both directions.
pub trait PermutationFamily: Send + Sync {
    fn domain(&self) -> usize;

    /// Panics if `i >= domain()`.
    fn forward(&self, i: usize) -> usize;

    /// Panics if `i >= domain()`.
    fn inverse(&self, i: usize) -> usize;

    fn checked_forward(&self, i: usize) -> Result<usize> {
        self.check(i)?;
        Ok(self.forward(i))
    }

    fn checked_inverse(&self, i: usize) -> Result<usize> {
        self.check(i)?;
        Ok(self.inverse(i))
    }

    fn check(&self, i: usize) -> Result<()> {
        if i < self.domain() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: i as u64,
                size: self.domain() as u64,
            })
        }
    }

    fn to_vec(&self) -> Vec<usize> {
        (0..self.domain()).map(|i| self.forward(i)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[derive(clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum PermutationMode {
    /// Full Fisher-Yates shuffle driven by ChaCha20.
    #[default]
    Shuffle,
    /// Six-round Feistel network with cycle walking.
    Feistel,
}

impl std::str::FromStr for PermutationMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "shuffle" | "uniform" => Ok(PermutationMode::Shuffle),
            "feistel" => Ok(PermutationMode::Feistel),
            other => Err(Error::InvalidSeed(format!("unknown permutation mode {other:?}"))),
        }
    }
}

pub fn permutation(mode: PermutationMode, seed: &Seed, domain: usize) -> Box<dyn PermutationFamily> {
    match mode {
        PermutationMode::Shuffle => Box::new(TablePermutation::shuffled(seed, domain)),
        PermutationMode::Feistel => Box::new(FeistelPermutation::new(seed, domain)),
    }
}

/// A permutation stored as forward and inverse tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TablePermutation {
    fwd: Vec<usize>,
    inv: Vec<usize>,
}

impl TablePermutation {
    pub fn new(fwd: Vec<usize>) -> Result<Self> {
        let n = fwd.len();
        let mut inv = vec![usize::MAX; n];
        for (i, &j) in fwd.iter().enumerate() {
            if j >= n || inv[j] != usize::MAX {
                return Err(Error::InvalidMatching(format!(
                    "not a permutation: image {j} at position {i}"
                )));
            }
            inv[j] = i;
        }
        Ok(TablePermutation { fwd, inv })
    }

    pub fn identity(n: usize) -> Self {
        TablePermutation {
            fwd: (0..n).collect(),
            inv: (0..n).collect(),
        }
    }

    pub fn shuffled(seed: &Seed, n: usize) -> Self {
        let mut rng = ChaCha20Rng::from_seed(seed.key("shuffle"));
        let mut fwd: Vec<usize> = (0..n).collect();
        fwd.shuffle(&mut rng);
        Self::new(fwd).expect("shuffle is a bijection")
    }

    /// Uniform permutation from an existing generator.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Self {
        let mut fwd: Vec<usize> = (0..n).collect();
        fwd.shuffle(rng);
        Self::new(fwd).expect("shuffle is a bijection")
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.fwd
    }
}

impl PermutationFamily for TablePermutation {
    fn domain(&self) -> usize {
        self.fwd.len()
    }

    fn forward(&self, i: usize) -> usize {
        self.fwd[i]
    }

    fn inverse(&self, i: usize) -> usize {
        self.inv[i]
    }
}

const FEISTEL_ROUNDS: usize = 6;

/// Balanced Feistel network on `2^(2h) >= domain` points, restricted to
/// `0..domain` by cycle walking. Uses O(1) memory.
#[derive(Debug, Clone)]
pub struct FeistelPermutation {
    domain: usize,
    half_bits: u32,
    keys: [u64; FEISTEL_ROUNDS],
}

impl FeistelPermutation {
    pub fn new(seed: &Seed, domain: usize) -> Self {
        let mut rng = ChaCha20Rng::from_seed(seed.key("feistel"));
        let keys = std::array::from_fn(|_| rng.random());
        let bits = usize::BITS - domain.saturating_sub(1).leading_zeros();
        FeistelPermutation {
            domain,
            half_bits: bits.div_ceil(2).max(1),
            keys,
        }
    }

    fn round(&self, k: u64, r: u64) -> u64 {
        // splitmix64 finaliser
        let mut z = r ^ k;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        (z ^ (z >> 31)) & self.mask()
    }

    fn mask(&self) -> u64 {
        (1u64 << self.half_bits) - 1
    }

    fn encrypt(&self, v: u64) -> u64 {
        let (mut l, mut r) = (v >> self.half_bits, v & self.mask());
        for &k in &self.keys {
            (l, r) = (r, l ^ self.round(k, r));
        }
        (l << self.half_bits) | r
    }

    fn decrypt(&self, v: u64) -> u64 {
        let (mut l, mut r) = (v >> self.half_bits, v & self.mask());
        for &k in self.keys.iter().rev() {
            (l, r) = (r ^ self.round(k, l), l);
        }
        (l << self.half_bits) | r
    }
}

impl PermutationFamily for FeistelPermutation {
    fn domain(&self) -> usize {
        self.domain
    }

    fn forward(&self, i: usize) -> usize {
        assert!(i < self.domain, "index {i} outside domain {}", self.domain);
        let mut v = self.encrypt(i as u64);
        while v >= self.domain as u64 {
            v = self.encrypt(v);
        }
        v as usize
    }

    fn inverse(&self, i: usize) -> usize {
        assert!(i < self.domain, "index {i} outside domain {}", self.domain);
        let mut v = self.decrypt(i as u64);
        while v >= self.domain as u64 {
            v = self.decrypt(v);
        }
        v as usize
    }
}
