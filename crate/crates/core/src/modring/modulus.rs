use crate::error::ArithError;

/// Largest admissible modulus: residues must fit in 63 bits.
pub const MAX_MODULUS: u64 = 1 << 62;

/// A modulus in `[2, 2^62]`, either a power of two or an arbitrary value
/// (primes for the syndrome field).
///
/// Power-of-two moduli reduce by masking; everything else reduces through
/// 128-bit intermediates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Modulus {
    value: u64,
    pow2: bool,
}

impl Modulus {
    pub fn new(value: u64) -> Result<Self, ArithError> {
        if !(2..=MAX_MODULUS).contains(&value) {
            return Err(ArithError::InvalidModulus(value));
        }
        Ok(Modulus {
            value,
            pow2: value.is_power_of_two(),
        })
    }

    /// `2^bits`.
    pub fn pow2(bits: u32) -> Result<Self, ArithError> {
        if bits == 0 || bits > 62 {
            return Err(ArithError::InvalidModulus(0));
        }
        Self::new(1u64 << bits)
    }

    #[inline]
    pub fn value(&self) -> u64 {
        self.value
    }

    #[inline]
    pub fn is_pow2(&self) -> bool {
        self.pow2
    }

    /// `⌈log2 q⌉`, the number of gadget digits per row.
    pub fn bits(&self) -> u32 {
        64 - (self.value - 1).leading_zeros()
    }

    #[inline]
    pub fn reduce(&self, x: u64) -> u64 {
        if self.pow2 {
            x & (self.value - 1)
        } else {
            x % self.value
        }
    }

    #[inline]
    pub fn reduce_u128(&self, x: u128) -> u64 {
        if self.pow2 {
            (x as u64) & (self.value - 1)
        } else {
            (x % self.value as u128) as u64
        }
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.value {
            s - self.value
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.value - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.value - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if self.pow2 {
            a.wrapping_mul(b) & (self.value - 1)
        } else {
            ((a as u128 * b as u128) % self.value as u128) as u64
        }
    }

    /// Residue of a signed integer.
    #[inline]
    pub fn from_i64(&self, x: i64) -> u64 {
        self.from_i128(x as i128)
    }

    #[inline]
    pub fn from_i128(&self, x: i128) -> u64 {
        x.rem_euclid(self.value as i128) as u64
    }

    /// Representative of `x` in `(-m/2, m/2]`.
    #[inline]
    pub fn centered(&self, x: u64) -> i64 {
        centered(x, self.value)
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = self.reduce(1);
        base = self.reduce(base);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via the extended Euclidean algorithm.
    pub fn inv(&self, a: u64) -> Result<u64, ArithError> {
        let (mut r0, mut r1) = (self.value as i128, self.reduce(a) as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        if r0 != 1 {
            return Err(ArithError::NotInvertible {
                value: a,
                modulus: self.value,
            });
        }
        Ok(self.from_i128(t0))
    }
}

/// Representative of the residue `x` in `(-m/2, m/2]`.
#[inline]
pub fn centered(x: u64, m: u64) -> i64 {
    debug_assert!(x < m);
    if x > m / 2 {
        -((m - x) as i64)
    } else {
        x as i64
    }
}

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        acc
    };
    let d_shift = (n - 1).trailing_zeros();
    let d = (n - 1) >> d_shift;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..d_shift {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest prime strictly greater than `x`.
pub fn next_prime_above(x: u64) -> u64 {
    let mut c = x + 1;
    while !is_prime(c) {
        c += 1;
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn centered_examples() {
        assert_eq!(centered(7, 8), -1);
        assert_eq!(centered(3, 97), 3);
        assert_eq!(centered(4, 8), 4);
        assert_eq!(centered(49, 97), -48);
        for x in 0..97u64 {
            assert_eq!((centered(x, 97)).rem_euclid(97) as u64, x);
        }
    }

    #[test]
    fn bits_is_ceil_log2() {
        assert_eq!(Modulus::new(8).unwrap().bits(), 3);
        assert_eq!(Modulus::new(16).unwrap().bits(), 4);
        assert_eq!(Modulus::new(97).unwrap().bits(), 7);
        assert_eq!(Modulus::new(1 << 62).unwrap().bits(), 62);
    }

    #[test]
    fn rejects_bad_moduli() {
        assert!(Modulus::new(1).is_err());
        assert!(Modulus::new((1 << 62) + 1).is_err());
    }

    #[test]
    fn pow2_and_generic_agree() {
        let m = Modulus::new(1 << 40).unwrap();
        let a = 0x12_3456_789a_u64;
        let b = 0xfe_dcba_9876_u64;
        assert_eq!(
            m.mul(a, b),
            ((a as u128 * b as u128) % (1u128 << 40)) as u64
        );
        assert_eq!(m.from_i64(-1), (1 << 40) - 1);
    }

    #[test]
    fn inverse_and_primes() {
        let p = Modulus::new(10007).unwrap();
        for a in 1..200 {
            assert_eq!(p.mul(a, p.inv(a).unwrap()), 1);
        }
        assert!(p.inv(0).is_err());
        assert_eq!(next_prime_above(2001), 2003);
        assert_eq!(next_prime_above(16), 17);
        assert!(is_prime((1 << 61) - 1));
        assert!(!is_prime(561));
    }
}
