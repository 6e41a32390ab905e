//! Exact modular arithmetic and the classical exponential sums.

pub mod factor;
mod sums;

pub use factor::{divisors, euler_phi, factorize, is_squarefree, mobius, prime_divisors, tau};
pub use sums::{
    gauss_closed, gauss_sum, kloosterman, ramanujan_brute, ramanujan_sum, salie_closed, salie_sum, selberg_check,
    selberg_sides, GaussClosed,
};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A residue class `value mod modulus` with `0 <= value < modulus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Residue {
    value: u64,
    modulus: u64,
}

impl Residue {
    /// Canonical residue of `a` modulo `modulus`.
    pub fn new(a: i128, modulus: u64) -> Self {
        assert!(modulus > 0, "modulus must be positive");
        let value = a.rem_euclid(modulus as i128) as u64;
        Self { value, modulus }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }
}

#[inline]
pub fn gcd(a: i128, b: i128) -> u64 {
    a.gcd(&b) as u64
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub fn reduce(a: i128, m: u64) -> u64 {
    a.rem_euclid(m as i128) as u64
}

/// Extended Jacobi symbol (a/n) for odd positive n.
pub fn jacobi_symbol(a: i128, n: i128) -> Result<i32> {
    if n <= 0 || n % 2 == 0 {
        return Err(Error::InvalidArgument(format!(
            "Jacobi symbol needs an odd positive modulus, got {n}"
        )));
    }
    Ok(jacobi_unchecked(a, n as u64))
}

pub(crate) fn jacobi_unchecked(a: i128, n: u64) -> i32 {
    let mut a = reduce(a, n);
    let mut n = n;
    let mut sign = 1;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        a %= n;
    }
    if n == 1 {
        sign
    } else {
        0
    }
}

/// Inverse of `a` modulo `c`, as a canonical residue. For `c = 1` this is 0.
pub fn mod_inverse(a: i128, c: u64) -> Result<Residue> {
    if c == 0 {
        return Err(Error::InvalidArgument("modulus must be positive".into()));
    }
    inverse_raw(a, c)
        .map(|x| Residue { value: x, modulus: c })
        .ok_or(Error::NotInvertible {
            a: a as i64,
            modulus: c,
        })
}

pub(crate) fn inverse_raw(a: i128, c: u64) -> Option<u64> {
    if c == 1 {
        return Some(0);
    }
    let a = reduce(a, c) as i128;
    let ext = a.extended_gcd(&(c as i128));
    if ext.gcd != 1 {
        return None;
    }
    Some(reduce(ext.x, c))
}

/// ε_c for odd c: 1 if c ≡ 1 mod 4, i if c ≡ 3 mod 4. Returned as (re, im).
pub fn epsilon(c: u64) -> num_complex::Complex64 {
    debug_assert!(c % 2 == 1);
    if c % 4 == 1 {
        num_complex::Complex64::new(1.0, 0.0)
    } else {
        num_complex::Complex64::new(0.0, 1.0)
    }
}

/// ε_c² ∈ {1, −1} for odd c.
pub fn epsilon_squared(c: u64) -> i32 {
    if c % 4 == 1 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn legendre_brute(a: i128, p: u64) -> i32 {
        let a = reduce(a, p);
        if a == 0 {
            return 0;
        }
        if (1..p).any(|x| x * x % p == a) {
            1
        } else {
            -1
        }
    }

    #[test]
    fn jacobi_examples() {
        assert_eq!(jacobi_symbol(1, 15).unwrap(), 1);
        assert_eq!(jacobi_symbol(3, 5).unwrap(), -1);
        assert_eq!(jacobi_symbol(2, 15).unwrap(), 1);
        assert_eq!(
            jacobi_symbol(2, 15).unwrap(),
            legendre_brute(2, 3) * legendre_brute(2, 5)
        );
        assert!(jacobi_symbol(1, 4).is_err());
        assert!(jacobi_symbol(1, 0).is_err());
        assert!(jacobi_symbol(1, -3).is_err());
    }

    #[test]
    fn jacobi_matches_legendre_product() {
        for n in (1..400u64).step_by(2) {
            let f = factorize(n);
            for a in -50i128..50 {
                let expect: i32 = f.iter().map(|&(p, e)| legendre_brute(a, p).pow(e)).product();
                assert_eq!(jacobi_unchecked(a, n), expect, "({a}/{n})");
                assert_eq!(expect == 0, gcd(a, n as i128) > 1);
            }
        }
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(mod_inverse(3, 5).unwrap().value(), 2);
        for c in 1..50u64 {
            assert_eq!(mod_inverse(1, c).unwrap().value(), 1 % c);
        }
        assert_eq!(mod_inverse(4, 6), Err(Error::NotInvertible { a: 4, modulus: 6 }));
    }

    proptest! {
        #[test]
        fn inverse_multiplies_to_one(a in 1i64..1_000_000, c in 2u64..1_000_000) {
            prop_assume!(gcd(a as i128, c as i128) == 1);
            let x = mod_inverse(a as i128, c).unwrap();
            prop_assert!(x.value() < c);
            prop_assert_eq!(mul_mod(a as u64 % c, x.value(), c), 1);
        }

        #[test]
        fn jacobi_multiplicative(a in -10_000i128..10_000, b in -10_000i128..10_000,
                                 n in 0u64..5_000, n2 in 0u64..5_000) {
            let n = 2 * n + 1;
            let n2 = 2 * n2 + 1;
            prop_assert_eq!(
                jacobi_unchecked(a * b, n),
                jacobi_unchecked(a, n) * jacobi_unchecked(b, n)
            );
            prop_assert_eq!(
                jacobi_unchecked(a, n * n2),
                jacobi_unchecked(a, n) * jacobi_unchecked(a, n2)
            );
        }
    }
}
