use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use super::seed::Seed;
use super::small_bias::BitSource;

/// Random-access source of `+1 / -1` values indexed by `u64`.
pub trait SignSource: Send + Sync {
    fn sign(&self, index: u64) -> i8;
}

impl SignSource for BitSource {
    fn sign(&self, index: u64) -> i8 {
        self.sign_unchecked(index)
    }
}

impl<S: SignSource + ?Sized> SignSource for &S {
    fn sign(&self, index: u64) -> i8 {
        (**self).sign(index)
    }
}

impl<S: SignSource + ?Sized> SignSource for Box<S> {
    fn sign(&self, index: u64) -> i8 {
        (**self).sign(index)
    }
}

/// Independent uniform signs from a ChaCha20 keystream, bit `i` of the stream.
#[derive(Debug, Clone)]
pub struct StreamSigns {
    key: [u8; 32],
}

impl StreamSigns {
    pub fn new(seed: &Seed) -> Self {
        StreamSigns {
            key: seed.key("signs"),
        }
    }
}

impl SignSource for StreamSigns {
    fn sign(&self, index: u64) -> i8 {
        let mut rng = ChaCha20Rng::from_seed(self.key);
        rng.set_word_pos((index / 32) as u128);
        if rng.next_u32() >> (index % 32) & 1 == 0 {
            1
        } else {
            -1
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ConstantSigns(pub i8);

impl SignSource for ConstantSigns {
    fn sign(&self, _index: u64) -> i8 {
        self.0
    }
}

/// Another source with one index negated.
#[derive(Debug, Clone)]
pub struct FlippedSign<S> {
    pub inner: S,
    pub index: u64,
}

impl<S: SignSource> SignSource for FlippedSign<S> {
    fn sign(&self, index: u64) -> i8 {
        let s = self.inner.sign(index);
        if index == self.index {
            -s
        } else {
            s
        }
    }
}

/// Reads `len` signs starting at `offset`.
pub fn collect_signs(src: &dyn SignSource, offset: u64, len: usize) -> Vec<i8> {
    (0..len as u64).map(|i| src.sign(offset + i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stream_is_random_access_and_balanced() {
        let s = StreamSigns::new(&Seed::from_u64(5));
        let v = collect_signs(&s, 0, 4000);
        let again = collect_signs(&s, 1000, 100);
        assert_eq!(&v[1000..1100], &again[..]);
        let sum: i64 = v.iter().map(|&x| x as i64).sum();
        assert!(sum.abs() < 300, "sum {sum}");
    }

    #[test]
    fn flip_changes_exactly_one() {
        let base = StreamSigns::new(&Seed::from_u64(9));
        let f = FlippedSign { inner: base.clone(), index: 17 };
        for i in 0..64 {
            assert_eq!(f.sign(i) == base.sign(i), i != 17);
        }
    }
}
