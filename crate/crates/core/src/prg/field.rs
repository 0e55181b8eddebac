//! Arithmetic in GF(2^m), 1 <= m <= 64.
//!
//! Elements are bit vectors in a `u64`; bit `i` is the coefficient of `X^i`.
//! The modulus is the lowest-weight irreducible polynomial of degree `m`,
//! taking the trinomial `X^m + X^a + 1` with the smallest `a` when one exists
//! and otherwise the pentanomial `X^m + X^a + X^b + X^c + 1` that is
//! lexicographically smallest in `(a, b, c)`.

/// Carry-less product of two 64-bit polynomials.
pub fn clmul(a: u64, b: u64) -> u128 {
    let a = a as u128;
    let mut acc = 0u128;
    let mut b = b;
    let mut shift = 0;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a << shift;
        }
        b >>= 1;
        shift += 1;
    }
    acc
}

fn degree(p: u128) -> i32 {
    127 - p.leading_zeros() as i32
}

/// `p mod f` over GF(2).
pub fn poly_rem(mut p: u128, f: u128) -> u128 {
    let df = degree(f);
    while p != 0 && degree(p) >= df {
        p ^= f << (degree(p) - df);
    }
    p
}

fn poly_gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let r = poly_rem(a, b);
        a = b;
        b = r;
    }
    a
}

fn mulmod(a: u128, b: u128, f: u128) -> u128 {
    poly_rem(clmul(a as u64, b as u64), f)
}

/// Ben-Or's test: `f` of degree `m` is irreducible iff
/// `gcd(X^(2^i) - X, f) = 1` for every `1 <= i <= m / 2`.
pub fn is_irreducible(f: u128) -> bool {
    let m = degree(f);
    if m < 1 {
        return false;
    }
    if m == 1 {
        return true;
    }
    if f & 1 == 0 {
        return false;
    }
    let mut power = 2u128; // X
    for _ in 0..m / 2 {
        power = mulmod(power, power, f);
        if poly_gcd(f, power ^ 2) != 1 {
            return false;
        }
    }
    true
}

/// The modulus used for GF(2^m), including the `X^m` term.
pub fn default_modulus(m: u32) -> u128 {
    assert!((1..=64).contains(&m), "field degree must be in 1..=64");
    let top = 1u128 << m;
    if m == 1 {
        return top | 1;
    }
    for a in 1..m {
        let f = top | (1u128 << a) | 1;
        if is_irreducible(f) {
            return f;
        }
    }
    for a in 3..m {
        for b in 2..a {
            for c in 1..b {
                let f = top | (1u128 << a) | (1u128 << b) | (1u128 << c) | 1;
                if is_irreducible(f) {
                    return f;
                }
            }
        }
    }
    unreachable!("every degree has a trinomial or pentanomial irreducible")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Gf2m {
    m: u32,
    modulus: u128,
}

impl Gf2m {
    pub fn new(m: u32) -> Self {
        Gf2m {
            m,
            modulus: default_modulus(m),
        }
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn modulus(&self) -> u128 {
        self.modulus
    }

    pub fn order(&self) -> u128 {
        1u128 << self.m
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        let mut p = clmul(a, b);
        let m = self.m as i32;
        // Clear bits m..=2m-2 from the top down.
        let mut top = degree(p);
        while top >= m {
            p ^= self.modulus << (top - m);
            top = degree(p);
        }
        p as u64
    }

    pub fn pow(&self, base: u64, mut exp: u64) -> u64 {
        let mut result = 1u64;
        let mut b = base;
        while exp > 0 {
            if exp & 1 == 1 {
                result = self.mul(result, b);
            }
            b = self.mul(b, b);
            exp >>= 1;
        }
        result
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_moduli() {
        // X^8 + X^4 + X^3 + X + 1 (no irreducible trinomial has degree 8).
        assert_eq!(default_modulus(8), 0x11b);
        assert_eq!(default_modulus(2), 0b111);
        assert_eq!(default_modulus(3), 0b1011);
        assert_eq!(default_modulus(6), 0b100_0011);
        // X^64 + X^4 + X^3 + X + 1
        assert_eq!(default_modulus(64), (1u128 << 64) | 0b11011);
    }

    #[test]
    fn reducible_polynomials_rejected() {
        assert!(!is_irreducible(0b101)); // (X + 1)^2
        assert!(!is_irreducible(0b1_0001)); // X^4 + 1
        assert!(!is_irreducible(0b11_1111)); // X^5+..+1 = (X+1)(X^4+X^2+1)
        assert!(is_irreducible(0b1_0011));
    }

    #[test]
    fn multiplicative_group_order() {
        for m in [2u32, 3, 5, 6, 8, 10] {
            let f = Gf2m::new(m);
            let order = (1u64 << m) - 1;
            for a in 1..(1u64 << m).min(200) {
                assert_eq!(f.pow(a, order), 1, "m={m} a={a}");
            }
        }
        let f = Gf2m::new(64);
        let a = 0x0123_4567_89ab_cdef;
        assert_eq!(f.pow(a, u64::MAX), 1);
    }

    #[test]
    fn mul_is_commutative_and_distributive() {
        let f = Gf2m::new(13);
        let mask = (1u64 << 13) - 1;
        let mut s = 99u64;
        for _ in 0..500 {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1);
            let (a, b, c) = (s & mask, (s >> 20) & mask, (s >> 40) & mask);
            assert_eq!(f.mul(a, b), f.mul(b, a));
            assert_eq!(f.mul(a, b ^ c), f.mul(a, b) ^ f.mul(a, c));
        }
    }
}
