//! η powers and the two-variable theta series.

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Zero};

use super::series::{rat, LaurentSeries};
use crate::error::{Error, Result};

/// `q^{e/24} Π_{n≥1} (1 − qⁿ)^e`, exact through relative q-power `cutoff`.
pub fn eta_power(e: i64, cutoff: i64) -> Result<LaurentSeries> {
    if e <= 0 || e % 2 != 0 {
        return Err(Error::Unsupported(format!(
            "eta power {e}: only even positive exponents"
        )));
    }
    if cutoff < 0 {
        return Err(Error::InvalidArgument(format!("cutoff {cutoff} < 0")));
    }
    let len = cutoff as usize + 1;
    let mut poly = vec![BigInt::zero(); len];
    poly[0] = BigInt::one();
    for n in 1..len {
        for _ in 0..e {
            for i in (n..len).rev() {
                let t = poly[i - n].clone();
                poly[i] -= t;
            }
        }
    }
    let offset = Rational64::new(e, 24);
    Ok(LaurentSeries::from_terms(
        poly.into_iter()
            .enumerate()
            .map(|(i, c)| (i as i64, 0, BigRational::from_integer(c))),
        offset,
        Rational64::zero(),
        1,
        offset + Rational64::from_integer(cutoff + 1),
    ))
}

/// Largest n ≥ 0 with n(n+1)/2 ≤ bound.
fn triangular_range(bound: i64) -> i64 {
    let mut n = 0;
    while (n + 1) * (n + 2) / 2 <= bound {
        n += 1;
    }
    n
}

/// `Σ_n s(n) q^{n(n+1)/2} ζⁿ` with offset q^{1/8} ζ^{1/2}, i.e. the half-integer
/// characteristic theta sum. `alternating` inserts (−1)ⁿ.
fn half_theta(alternating: bool, cutoff: i64) -> LaurentSeries {
    let top = triangular_range(cutoff) + 1;
    let terms = (-top - 1..=top).map(|n| {
        let sign = if alternating && n.rem_euclid(2) == 1 { -1 } else { 1 };
        (n * (n + 1) / 2, n, rat(sign))
    });
    LaurentSeries::from_terms(
        terms,
        Rational64::new(1, 8),
        Rational64::new(1, 2),
        1,
        Rational64::from_integer(cutoff + 1),
    )
}

/// `Σ_n s(n) q^{n²/2} ζⁿ` on the half-integer q-grid.
fn integer_theta(alternating: bool, cutoff: i64) -> LaurentSeries {
    let mut top = 0;
    while (top + 1) * (top + 1) < 2 * (cutoff + 1) {
        top += 1;
    }
    let terms = (-top..=top).map(|n| {
        let sign = if alternating && n.rem_euclid(2) == 1 { -1 } else { 1 };
        (n * n, n, rat(sign))
    });
    LaurentSeries::from_terms(
        terms,
        Rational64::zero(),
        Rational64::zero(),
        2,
        Rational64::from_integer(cutoff + 1),
    )
}

/// θ₁(τ,z)² where θ₁ = −i Σ (−1)ⁿ q^{(2n+1)²/8} ζ^{n+1/2}.
pub fn theta1_squared(cutoff: i64) -> LaurentSeries {
    half_theta(true, cutoff).square().neg()
}

/// θ₂(τ,z) = Σ q^{(2n+1)²/8} ζ^{n+1/2}.
pub fn theta2(cutoff: i64) -> LaurentSeries {
    half_theta(false, cutoff)
}

/// θ₃(τ,z) = Σ q^{n²/2} ζⁿ.
pub fn theta3(cutoff: i64) -> LaurentSeries {
    integer_theta(false, cutoff)
}

/// θ₄(τ,z) = Σ (−1)ⁿ q^{n²/2} ζⁿ.
pub fn theta4(cutoff: i64) -> LaurentSeries {
    integer_theta(true, cutoff)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational64 {
        Rational64::from_integer(n)
    }

    #[test]
    fn delta_coefficients() {
        let d = eta_power(24, 10).unwrap();
        let expect = [1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920];
        for (i, &c) in expect.iter().enumerate() {
            assert_eq!(d.coefficient(r(i as i64 + 1), r(0)).unwrap(), rat(c));
        }
    }

    #[test]
    fn eta_pentagonal_oracle() {
        // η² squared against the pentagonal-number series for η, then squared.
        let n = 40;
        let mut eta = vec![0i64; n + 1];
        for k in -20i64..=20 {
            let p = k * (3 * k - 1) / 2;
            if (0..=n as i64).contains(&p) {
                eta[p as usize] += if k.rem_euclid(2) == 0 { 1 } else { -1 };
            }
        }
        let mut sq = vec![0i64; n + 1];
        for i in 0..=n {
            for j in 0..=n - i {
                sq[i + j] += eta[i] * eta[j];
            }
        }
        let e2 = eta_power(2, n as i64).unwrap();
        assert_eq!(e2.q_offset(), Rational64::new(1, 12));
        for (i, &c) in sq.iter().enumerate() {
            let qe = Rational64::new(1, 12) + r(i as i64);
            assert_eq!(e2.coefficient(qe, r(0)).unwrap(), rat(c));
        }
    }

    #[test]
    fn eta_products_add_exponents() {
        let a = eta_power(6, 50).unwrap();
        let b = eta_power(12, 50).unwrap();
        let p = a.mul(&a);
        for i in 0..50 {
            let qe = Rational64::new(1, 2) + r(i);
            assert_eq!(p.coefficient(qe, r(0)).unwrap(), b.coefficient(qe, r(0)).unwrap());
        }
    }

    #[test]
    fn odd_eta_power_rejected() {
        assert!(matches!(eta_power(3, 10), Err(Error::Unsupported(_))));
    }

    #[test]
    fn theta1_squared_shape() {
        let t = theta1_squared(20);
        let q = Rational64::new(1, 4);
        assert_eq!(t.coefficient(q, r(1)).unwrap(), rat(-1));
        assert_eq!(t.coefficient(q, r(0)).unwrap(), rat(2));
        assert_eq!(t.coefficient(q, r(-1)).unwrap(), rat(-1));
        for (qe, ze, c) in t.terms() {
            assert!(ze.is_integer());
            assert!((qe - q).is_integer());
            assert_eq!(&t.coefficient(qe, -ze).unwrap(), c);
        }
        assert!(t.at_zeta_one().is_zero());
    }
}
