//! Small-bias bits by the powering construction.
//!
//! A seed of `2m` bits is split into `x` (first half) and `y` (second half),
//! each read as an element of GF(2^m). Output bit `i` is the GF(2) inner
//! product `<x^i, y>`, mapped 0 -> +1 and 1 -> -1. For any nonempty set `S`
//! of positions below `N` the bias of the product over `S` is at most
//! `(N - 1) / 2^m`.

use serde::Serialize;

use super::field::Gf2m;
use super::seed::Seed;
use crate::error::{Error, Result};

pub const DEFAULT_FIELD_DEGREE: u32 = 64;

#[derive(Debug, Clone)]
pub struct BitSource {
    field: Gf2m,
    x: u64,
    y: u64,
    len: u64,
}

impl BitSource {
    /// Reads `x` and `y` from the first `2m` bits of `seed`; extra bits are ignored.
    pub fn new(seed: &Seed, len: u64, m: u32) -> Result<Self> {
        if !(1..=64).contains(&m) {
            return Err(Error::InvalidSeed(format!("field degree {m} outside 1..=64")));
        }
        let needed = 2 * m as usize;
        if seed.bit_len() < needed {
            return Err(Error::SeedTooShort {
                needed,
                got: seed.bit_len(),
            });
        }
        let m = m as usize;
        Ok(Self::from_parts(seed.bits(0, m), seed.bits(m, m), len, m as u32))
    }

    pub fn from_parts(x: u64, y: u64, len: u64, m: u32) -> Self {
        let mask = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
        BitSource {
            field: Gf2m::new(m),
            x: x & mask,
            y: y & mask,
            len,
        }
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn field_degree(&self) -> u32 {
        self.field.degree()
    }

    /// `y = 0` gives all +1; `x = 0` gives a single informative bit.
    pub fn is_weak(&self) -> bool {
        self.y == 0 || self.x == 0
    }

    /// Bias bound `(N - 1) / 2^m` for subsets of the first `N` outputs.
    pub fn delta(&self) -> f64 {
        bias_bound(self.len, self.field.degree())
    }

    pub fn bit_at(&self, i: u64) -> Result<i8> {
        if i >= self.len {
            return Err(Error::IndexOutOfRange {
                index: i,
                size: self.len,
            });
        }
        Ok(self.sign_unchecked(i))
    }

    /// `<x^i, y>` as a sign, for any `i`. O(log i) field multiplications.
    pub fn sign_unchecked(&self, i: u64) -> i8 {
        to_sign(self.field.pow(self.x, i) & self.y)
    }

    pub fn generate(&self) -> Vec<i8> {
        let mut out = Vec::with_capacity(self.len as usize);
        let mut p = 1u64;
        for _ in 0..self.len {
            out.push(to_sign(p & self.y));
            p = self.field.mul(p, self.x);
        }
        out
    }
}

fn to_sign(v: u64) -> i8 {
    if v.count_ones() % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn bias_bound(len: u64, m: u32) -> f64 {
    len.saturating_sub(1) as f64 / 2f64.powi(m as i32)
}

/// `generate_bits` with the default field degree.
pub fn generate_bits(seed: &Seed, len: u64) -> Result<Vec<i8>> {
    Ok(BitSource::new(seed, len, DEFAULT_FIELD_DEGREE)?.generate())
}

pub fn bit_at(seed: &Seed, len: u64, i: u64) -> Result<i8> {
    BitSource::new(seed, len, DEFAULT_FIELD_DEGREE)?.bit_at(i)
}

#[derive(Debug, Clone, Serialize)]
pub struct BiasCertificate {
    pub field_degree: u32,
    pub len: usize,
    pub max_order: usize,
    pub seeds: u64,
    /// Largest `|E[prod_{i in S} y_i]|` over `1 <= |S| <= max_order`.
    pub max_bias: f64,
    /// Positions of a subset attaining `max_bias`.
    pub worst_subset: Vec<usize>,
    pub delta: f64,
}

impl BiasCertificate {
    pub fn holds(&self) -> bool {
        self.max_bias <= self.delta + 1e-12
    }
}

/// Averages every parity of order `1..=max_order` over all `2^(2m)` seeds.
///
/// Counts output patterns first and then takes a Walsh-Hadamard transform,
/// so the cost is `4^m * len + len * 2^len`.
pub fn certify_bias(m: u32, len: usize, max_order: usize) -> Result<BiasCertificate> {
    if m > 12 || len > 20 || len == 0 {
        return Err(Error::InvalidSeed(format!(
            "exhaustive certification needs m <= 12 and 1 <= N <= 20, got m={m}, N={len}"
        )));
    }
    let field = Gf2m::new(m);
    let size = 1u64 << m;
    let mut hist = vec![0i64; 1 << len];
    for x in 0..size {
        let mut powers = Vec::with_capacity(len);
        let mut p = 1u64;
        for _ in 0..len {
            powers.push(p);
            p = field.mul(p, x);
        }
        for y in 0..size {
            let mut pattern = 0usize;
            for (i, &pw) in powers.iter().enumerate() {
                if (pw & y).count_ones() % 2 == 1 {
                    pattern |= 1 << i;
                }
            }
            hist[pattern] += 1;
        }
    }
    walsh_hadamard(&mut hist);
    let seeds = size * size;
    let mut best = (0i64, 0usize);
    for (s, &v) in hist.iter().enumerate().skip(1) {
        if (s.count_ones() as usize) <= max_order && v.abs() > best.0 {
            best = (v.abs(), s);
        }
    }
    let worst_subset = (0..len).filter(|i| best.1 >> i & 1 == 1).collect();
    Ok(BiasCertificate {
        field_degree: m,
        len,
        max_order,
        seeds,
        max_bias: best.0 as f64 / seeds as f64,
        worst_subset,
        delta: bias_bound(len as u64, m),
    })
}

/// In-place unnormalized transform: `h[S] <- sum_p h[p] (-1)^{|S & p|}`.
fn walsh_hadamard(h: &mut [i64]) {
    let mut half = 1;
    while half < h.len() {
        for block in h.chunks_mut(2 * half) {
            let (a, b) = block.split_at_mut(half);
            for (u, v) in a.iter_mut().zip(b.iter_mut()) {
                let (s, t) = (*u + *v, *u - *v);
                *u = s;
                *v = t;
            }
        }
        half *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_second_half_is_constant_and_weak() {
        let seed = Seed::from_hex(&format!("{}{}", "ab".repeat(8), "00".repeat(8))).unwrap();
        let src = BitSource::new(&seed, 40, 64).unwrap();
        assert!(src.is_weak());
        assert!(src.generate().iter().all(|&b| b == 1));
    }

    #[test]
    fn short_seed_rejected() {
        let err = BitSource::new(&Seed::from_u64(1), 8, 64).unwrap_err();
        assert!(matches!(err, Error::SeedTooShort { needed: 128, got: 64 }));
        assert!(BitSource::new(&Seed::from_u64(1), 8, 32).is_ok());
    }

    #[test]
    fn random_access_matches_stream() {
        let seed = Seed::from_u64(0xdead_beef).derive("t", 0);
        for m in [6u32, 17, 64] {
            let src = BitSource::new(&seed, 300, m).unwrap();
            let all = src.generate();
            for (i, &b) in all.iter().enumerate() {
                assert_eq!(src.bit_at(i as u64).unwrap(), b);
            }
            assert!(src.bit_at(300).is_err());
        }
    }

    #[test]
    fn walsh_hadamard_of_point_mass() {
        let mut h = vec![0i64; 8];
        h[0b101] = 1;
        walsh_hadamard(&mut h);
        for (s, &v) in h.iter().enumerate() {
            let expected = if (s & 0b101).count_ones() % 2 == 0 { 1 } else { -1 };
            assert_eq!(v, expected);
        }
    }

    #[test]
    fn small_field_certificate() {
        let cert = certify_bias(4, 8, 3).unwrap();
        assert!(cert.holds(), "{cert:?}");
        assert_eq!(cert.seeds, 256);
    }
}
