//! Trial-division factorization backed by a lazily built smallest-prime-factor
//! table. Moduli stay around 10^6 at desk scale, so nothing fancier is needed.

use std::sync::OnceLock;

const SPF_LIMIT: usize = 1 << 21;

fn spf_table() -> &'static [u32] {
    static TABLE: OnceLock<Vec<u32>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut spf = vec![0u32; SPF_LIMIT + 1];
        for i in 2..=SPF_LIMIT {
            if spf[i] == 0 {
                let mut j = i;
                while j <= SPF_LIMIT {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        spf
    })
}

/// Prime factorization as (prime, exponent) pairs in ascending order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n > 0, "factorize(0)");
    let mut out: Vec<(u64, u32)> = Vec::new();
    let push = |p: u64, out: &mut Vec<(u64, u32)>| match out.last_mut() {
        Some((q, e)) if *q == p => *e += 1,
        _ => out.push((p, 1)),
    };
    if (n as usize) <= SPF_LIMIT {
        let spf = spf_table();
        while n > 1 {
            let p = spf[n as usize] as u64;
            push(p, &mut out);
            n /= p;
        }
        return out;
    }
    let mut p = 2u64;
    while p * p <= n {
        while n % p == 0 {
            push(p, &mut out);
            n /= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        push(n, &mut out);
    }
    out
}

/// Distinct prime divisors in ascending order.
pub fn prime_divisors(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

/// Number of divisors τ(n).
pub fn tau(n: u64) -> u64 {
    factorize(n).iter().map(|&(_, e)| e as u64 + 1).product()
}

/// Euler's totient φ(n).
pub fn euler_phi(n: u64) -> u64 {
    factorize(n).iter().map(|&(p, e)| (p - 1) * p.pow(e - 1)).product()
}

/// Möbius function μ(n).
pub fn mobius(n: u64) -> i64 {
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// All positive divisors in ascending order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut divs = vec![1u64];
    for (p, e) in factorize(n) {
        let len = divs.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs.sort_unstable();
    divs
}

/// True if n is squarefree.
pub fn is_squarefree(n: u64) -> bool {
    factorize(n).iter().all(|&(_, e)| e == 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_tau(n: u64) -> u64 {
        (1..=n).filter(|d| n % d == 0).count() as u64
    }

    fn brute_phi(n: u64) -> u64 {
        (1..=n).filter(|&k| num_integer::gcd(k, n) == 1).count() as u64
    }

    #[test]
    fn arithmetic_functions_match_brute_force() {
        for n in 1..=500u64 {
            assert_eq!(tau(n), brute_tau(n), "tau({n})");
            assert_eq!(euler_phi(n), brute_phi(n), "phi({n})");
            let d = divisors(n);
            assert_eq!(d.len() as u64, brute_tau(n));
            assert!(d.iter().all(|x| n % x == 0));
        }
        assert_eq!(mobius(1), 1);
        assert_eq!(mobius(30), -1);
        assert_eq!(mobius(12), 0);
        assert_eq!(mobius(15), 1);
    }

    #[test]
    fn large_inputs_use_trial_division() {
        let n = 4_000_037u64 * 3;
        let f = factorize(n);
        assert_eq!(f.iter().map(|&(p, e)| p.pow(e)).product::<u64>(), n);
        assert_eq!(factorize(1), vec![]);
    }
}
