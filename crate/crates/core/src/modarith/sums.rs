//! Gauss, Kloosterman, Salié and Ramanujan sums: direct evaluation plus the
//! classical closed forms they are checked against.

use num_complex::Complex64;

use super::factor::{divisors, euler_phi, mobius};
use super::{epsilon, gcd, inverse_raw, jacobi_unchecked, mul_mod, reduce};
use crate::error::{Error, Result};
use crate::sum::{e_frac, Accumulator, UnitRootSum, UnitRoots};

fn check_odd(c: u64) -> Result<()> {
    if c == 0 {
        return Err(Error::InvalidArgument("modulus must be positive".into()));
    }
    if c % 2 == 0 {
        return Err(Error::UnsupportedModulus(c));
    }
    Ok(())
}

/// Σ_{λ mod c} e(aλ²/c) for odd c coprime to a, by direct summation.
pub fn gauss_sum(a: i64, c: u64) -> Result<UnitRootSum> {
    check_odd(c)?;
    if gcd(a as i128, c as i128) != 1 {
        return Err(Error::InvalidArgument(format!("gcd({a}, {c}) > 1")));
    }
    let roots = UnitRoots::new(c);
    let a = reduce(a as i128, c);
    let mut acc = Accumulator::new();
    for lambda in 0..c {
        acc.add(roots.at(mul_mod(a, mul_mod(lambda, lambda, c), c)));
    }
    Ok(acc.finish())
}

/// The closed form ε_c·(a/c)·√c, factored for reporting.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct GaussClosed {
    pub epsilon: Complex64,
    pub symbol: i32,
    pub value: Complex64,
}

pub fn gauss_closed(a: i64, c: u64) -> Result<GaussClosed> {
    check_odd(c)?;
    if gcd(a as i128, c as i128) != 1 {
        return Err(Error::InvalidArgument(format!("gcd({a}, {c}) > 1")));
    }
    let eps = epsilon(c);
    let symbol = jacobi_unchecked(a as i128, c);
    Ok(GaussClosed {
        epsilon: eps,
        symbol,
        value: eps * (symbol as f64) * (c as f64).sqrt(),
    })
}

/// Classical Kloosterman sum S(a, b; c) = Σ*_{ρ mod c} e((aρ + bρ̄)/c).
pub fn kloosterman(a: i64, b: i64, c: u64) -> Result<UnitRootSum> {
    if c == 0 {
        return Err(Error::InvalidArgument("modulus must be positive".into()));
    }
    Ok(kloosterman_raw(a as i128, b as i128, c))
}

pub(crate) fn kloosterman_raw(a: i128, b: i128, c: u64) -> UnitRootSum {
    if c == 1 {
        return UnitRootSum::one();
    }
    let roots = UnitRoots::new(c);
    let (a, b) = (reduce(a, c), reduce(b, c));
    let mut acc = Accumulator::new();
    for rho in 1..c {
        if let Some(rb) = inverse_raw(rho as i128, c) {
            acc.add(roots.at((mul_mod(a, rho, c) + mul_mod(b, rb, c)) % c));
        }
    }
    acc.finish()
}

/// Salié sum Σ*_{ρ mod c} (ρ/c) e((aρ + bρ̄)/c) for odd c, by direct summation.
pub fn salie_sum(a: i64, b: i64, c: u64) -> Result<UnitRootSum> {
    check_odd(c)?;
    if gcd(a as i128, c as i128) != 1 {
        return Err(Error::InvalidArgument(format!("gcd({a}, {c}) > 1")));
    }
    if c == 1 {
        return Ok(UnitRootSum::one());
    }
    let roots = UnitRoots::new(c);
    let (ar, br) = (reduce(a as i128, c), reduce(b as i128, c));
    let mut acc = Accumulator::new();
    for rho in 1..c {
        if let Some(rb) = inverse_raw(rho as i128, c) {
            let chi = jacobi_unchecked(rho as i128, c) as f64;
            acc.add(roots.at((mul_mod(ar, rho, c) + mul_mod(br, rb, c)) % c) * chi);
        }
    }
    Ok(acc.finish())
}

/// Closed-form Salié evaluation ε_c·(a/c)·√c·Σ_{v² ≡ ab mod c} e(2v/c),
/// valid for odd c with gcd(ab, c) = 1.
pub fn salie_closed(a: i64, b: i64, c: u64) -> Result<UnitRootSum> {
    check_odd(c)?;
    if gcd(a as i128 * b as i128, c as i128) != 1 {
        return Err(Error::PreconditionViolated(format!(
            "closed Salié form needs gcd(ab, c) = 1, got a = {a}, b = {b}, c = {c}"
        )));
    }
    let target = reduce(a as i128 * b as i128, c);
    let mut acc = Accumulator::new();
    for v in 0..c {
        if mul_mod(v, v, c) == target {
            acc.add(e_frac(2 * v as i128, c));
        }
    }
    let factor = epsilon(c) * (jacobi_unchecked(a as i128, c) as f64) * (c as f64).sqrt();
    Ok(acc.finish().scale(factor))
}

/// Ramanujan sum c_c(a) via μ(c/(c,a))·φ(c)/φ(c/(c,a)).
pub fn ramanujan_sum(a: i64, c: u64) -> Result<i64> {
    if c == 0 {
        return Err(Error::InvalidArgument("modulus must be positive".into()));
    }
    let g = gcd(a as i128, c as i128);
    let q = c / g;
    Ok(mobius(q) * (euler_phi(c) / euler_phi(q)) as i64)
}

/// Σ*_{x mod c} e(ax/c) by direct summation.
pub fn ramanujan_brute(a: i64, c: u64) -> UnitRootSum {
    let mut acc = Accumulator::new();
    for x in 0..c {
        if gcd(x as i128, c as i128) == 1 {
            acc.add(e_frac(a as i128 * x as i128, c));
        }
    }
    acc.finish()
}

/// Both sides of Selberg's identity
/// S(−y, a; c) = Σ_{l | (y,a,c)} l·S(−ay/l², 1; c/l).
pub fn selberg_sides(y: i64, a: i64, c: u64) -> Result<(UnitRootSum, UnitRootSum)> {
    if c == 0 {
        return Err(Error::InvalidArgument("modulus must be positive".into()));
    }
    let lhs = kloosterman_raw(-(y as i128), a as i128, c);
    let g = gcd(gcd(y as i128, a as i128) as i128, c as i128);
    let mut rhs = Accumulator::new();
    for l in divisors(g) {
        let li = l as i128;
        let arg = -(a as i128) * (y as i128) / (li * li);
        rhs.add_sum(kloosterman_raw(arg, 1, c / l).scale(Complex64::new(l as f64, 0.0)));
    }
    Ok((lhs, rhs.finish()))
}

pub fn selberg_check(y: i64, a: i64, c: u64) -> Result<bool> {
    let (lhs, rhs) = selberg_sides(y, a, c)?;
    Ok(lhs.agrees_with(&rhs, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(z: Complex64, w: Complex64, tol: f64) -> bool {
        (z - w).norm() <= tol
    }

    #[test]
    fn gauss_examples() {
        let g = gauss_sum(1, 1).unwrap();
        assert!(close(g.value, Complex64::new(1.0, 0.0), 1e-15));
        let g = gauss_sum(1, 3).unwrap();
        let direct = Complex64::new(1.0, 0.0) + e_frac(1, 3) * 2.0;
        assert!(close(g.value, direct, 1e-12));
        assert!(close(g.value, Complex64::new(0.0, 3f64.sqrt()), 1e-12));
        let g = gauss_sum(2, 5).unwrap();
        assert!(close(g.value, Complex64::new(-(5f64.sqrt()), 0.0), 1e-12));
        assert_eq!(gauss_sum(1, 4), Err(Error::UnsupportedModulus(4)));
        assert!(matches!(gauss_sum(3, 9), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn gauss_closed_form_small_sweep() {
        for c in (1..200u64).step_by(2) {
            for a in 1..c.max(2) as i64 {
                if gcd(a as i128, c as i128) != 1 {
                    continue;
                }
                let s = gauss_sum(a, c).unwrap();
                let cl = gauss_closed(a, c).unwrap();
                assert!(close(s.value, cl.value, s.err + 1e-9), "a={a} c={c}");
            }
        }
    }

    #[test]
    fn kloosterman_examples() {
        for c in 1..60u64 {
            let s = kloosterman(0, 0, c).unwrap();
            assert!(close(s.value, Complex64::new(euler_phi(c) as f64, 0.0), s.err + 1e-12));
        }
        let s = kloosterman(1, 1, 2).unwrap();
        assert!(close(s.value, Complex64::new(1.0, 0.0), 1e-15));
        for c in 1..40u64 {
            for a in -5..5 {
                for b in -5..5 {
                    let s = kloosterman(a, b, c).unwrap();
                    let t = kloosterman(b, a, c).unwrap();
                    assert!(s.agrees_with(&t, 0.0));
                    assert!(s.value.im.abs() <= s.err);
                }
            }
        }
    }

    #[test]
    fn salie_examples() {
        let s = salie_sum(1, 0, 3).unwrap();
        let direct = e_frac(1, 3) - e_frac(2, 3);
        assert!(close(s.value, direct, 1e-12));
        let s = salie_sum(1, 1, 5).unwrap();
        let cl = salie_closed(1, 1, 5).unwrap();
        let expected = (e_frac(2, 5) + e_frac(-2, 5)) * 5f64.sqrt();
        assert!(close(cl.value, expected, 1e-12));
        assert!(s.agrees_with(&cl, 1e-9));
        assert_eq!(salie_sum(1, 1, 6), Err(Error::UnsupportedModulus(6)));
        assert!(salie_closed(1, 3, 9).is_err());
    }

    #[test]
    fn salie_closed_form_sweep() {
        for c in (1..=99u64).step_by(2) {
            for a in [1i64, 2, 7, 11, -4] {
                for b in [1i64, 3, 5, -13, 17] {
                    if gcd(a as i128 * b as i128, c as i128) != 1 {
                        continue;
                    }
                    let s = salie_sum(a, b, c).unwrap();
                    let cl = salie_closed(a, b, c).unwrap();
                    assert!(s.agrees_with(&cl, 1e-9), "a={a} b={b} c={c}");
                }
            }
        }
    }

    #[test]
    fn ramanujan_examples() {
        for c in 1..50u64 {
            assert_eq!(ramanujan_sum(0, c).unwrap(), euler_phi(c) as i64);
        }
        for p in [2u64, 3, 5, 7, 11, 97] {
            assert_eq!(ramanujan_sum(1, p).unwrap(), -1);
        }
        for c in 1..=100u64 {
            for a in -3..=(c as i64 + 3) {
                let exact = ramanujan_sum(a, c).unwrap();
                let brute = ramanujan_brute(a, c);
                assert_eq!(brute.value.re.round() as i64, exact, "a={a} c={c}");
                assert!(exact.unsigned_abs() <= gcd(a as i128, c as i128));
            }
        }
    }

    #[test]
    fn selberg_examples() {
        assert!(selberg_check(2, 2, 2).unwrap());
        for c in 1..=50u64 {
            for (y, a) in [(1i64, 1i64), (3, 5), (7, 2), (-4, 9)] {
                if gcd(gcd(y as i128, a as i128) as i128, c as i128) != 1 {
                    continue;
                }
                let lhs = kloosterman(-y, a, c).unwrap();
                let rhs = kloosterman(-a * y, 1, c).unwrap();
                assert!(lhs.agrees_with(&rhs, 0.0));
                assert!(selberg_check(y, a, c).unwrap());
            }
        }
    }
}
