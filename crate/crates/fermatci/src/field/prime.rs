use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// The prime field 𝔽_p with elements stored as residues in `0..p`.
///
/// Every coefficient in this crate lives here, so Frobenius fixes all
/// coefficients (`c^p = c`) and p-th roots of coefficients are trivial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeField {
    p: u64,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn reduce(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.p - b) % self.p
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        (self.p - a) % self.p
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        // p < 2^32 in practice; keep the full-width product anyway.
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    /// Multiplicative inverse by Fermat's little theorem.
    pub fn inv(&self, a: u64) -> Result<u64> {
        if a % self.p == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.p - 2))
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        base %= self.p;
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_composites() {
        assert_eq!(PrimeField::new(1).unwrap_err(), Error::NotPrime(1));
        assert_eq!(PrimeField::new(4).unwrap_err(), Error::NotPrime(4));
        assert!(PrimeField::new(2).is_ok());
        assert!(PrimeField::new(13).is_ok());
    }

    #[test]
    fn frobenius_fixes_prime_field() {
        for p in [2u64, 3, 5, 7, 13] {
            let f = PrimeField::new(p).unwrap();
            for c in 0..p {
                assert_eq!(f.pow(c, p), c);
            }
        }
    }

    #[test]
    fn inverse() {
        let f = PrimeField::new(5).unwrap();
        for a in 1..5 {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
        assert!(f.inv(0).is_err());
    }
}
