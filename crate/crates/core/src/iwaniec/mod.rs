//! Prime-weighted geometric sums, their three-way split, the bilinear-phase
//! ingredients f(a,t) and S_a(B), and the exponent endgame.

mod endgame;

use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::bessel::HalfOrder;
use crate::error::{Error, Result};
use crate::hsums::IndexData;
use crate::modarith::{gcd, inverse_raw, jacobi_unchecked, prime_divisors, reduce, Residue};
use crate::petersson::{ordered_series, tail_constant};
use crate::sum::{e_frac, Accumulator, UnitRootSum};

pub use endgame::{
    crossover, delta_of, endgame_exponent, high_case, low_case, p_ge_t_condition, p_ge_t_threshold, parse_rational,
    serialize_rational, sigma_grid, sigma_max, theorem_exponent, theorem_exponent_check, EndgameReport, ProofParams,
    Regime, TheoremCheck,
};

/// Primes in [lo, hi] by a segmented sieve of Eratosthenes.
pub fn primes_between(lo: u64, hi: u64) -> Vec<u64> {
    if hi < 2 || hi < lo {
        return Vec::new();
    }
    let lo = lo.max(2);
    let root = (hi as f64).sqrt() as u64 + 1;
    let mut small = vec![true; root as usize + 1];
    let mut base = Vec::new();
    for i in 2..=root as usize {
        if small[i] {
            base.push(i as u64);
            let mut j = i * i;
            while j <= root as usize {
                small[j] = false;
                j += i;
            }
        }
    }
    const SEGMENT: u64 = 1 << 16;
    let mut out = Vec::new();
    let mut start = lo;
    while start <= hi {
        let end = (start + SEGMENT - 1).min(hi);
        let mut mark = vec![true; (end - start + 1) as usize];
        for &p in &base {
            if p * p > end {
                break;
            }
            let mut j = (start.div_ceil(p) * p).max(p * p);
            while j <= end {
                mark[(j - start) as usize] = false;
                j += p;
            }
        }
        out.extend(
            mark.iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(|(i, _)| start + i as u64),
        );
        start = end + 1;
    }
    out
}

/// Weight ω(c) = Σ log p over primes p ∈ [P, 2P] with p ∤ mD and p | c.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaWeight {
    pub p: u64,
    pub m: i64,
    pub d: i64,
}

impl OmegaWeight {
    pub fn new(p: u64, m: i64, d: i64) -> Result<Self> {
        if p < 2 {
            return Err(Error::InvalidArgument(format!("P must be at least 2, got {p}")));
        }
        Ok(Self { p, m, d })
    }

    fn admissible(&self, prime: u64) -> bool {
        let md = self.m as i128 * self.d as i128;
        prime >= self.p && prime <= 2 * self.p && md % prime as i128 != 0
    }

    pub fn at(&self, c: u64) -> f64 {
        prime_divisors(c)
            .into_iter()
            .filter(|&p| self.admissible(p))
            .map(|p| (p as f64).ln())
            .sum()
    }

    /// The primes contributing to ω, from the sieve.
    pub fn primes(&self) -> Vec<u64> {
        primes_between(self.p, 2 * self.p)
            .into_iter()
            .filter(|&p| self.admissible(p))
            .collect()
    }
}

pub fn omega(c: u64, p: u64, m: i64, d: i64) -> Result<f64> {
    Ok(OmegaWeight::new(p, m, d)?.at(c))
}

/// A truncated ω-weighted series with a bound on the discarded part.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightedSum {
    pub value: UnitRootSum,
    pub tail: f64,
    pub c_max: u64,
}

/// Σ_{c > x} log(c)·c^{−ν} bound times the per-term constant.
fn weighted_tail(k: i64, index: &IndexData, x: u64) -> Result<f64> {
    let nu = HalfOrder::from_weight(k)?.nu();
    let a = tail_constant(k, index)? / (PI / (2.0 * index.m as f64).sqrt());
    let integral = |x: f64| x.powf(1.0 - nu) * (x.ln() / (nu - 1.0) + 1.0 / ((nu - 1.0) * (nu - 1.0)));
    // log(x)·x^{−ν} is decreasing for x ≥ 2 when ν > 1/ln 2.
    Ok(if x >= 2 {
        a * integral(x as f64)
    } else {
        a * (2f64.ln() * 2f64.powf(-nu) + integral(2.0))
    })
}

/// 𝒮 = Σ_± Σ_{c ≤ C_max} ω(c)·c^{−3/2}·H^±·e(±r²/(2mc))·J_ν(π|D|/(mc)).
#[allow(non_snake_case)]
pub fn weighted_S(k: i64, index: &IndexData, p: u64, c_max: u64) -> Result<WeightedSum> {
    let order = HalfOrder::from_weight(k)?;
    let w = OmegaWeight::new(p, index.m, index.d)?;
    let (value, _) = ordered_series(order, index, 1, 0, c_max, |c| w.at(c));
    Ok(WeightedSum {
        value,
        tail: weighted_tail(k, index, c_max)?,
        c_max,
    })
}

/// The same double sum in the other order: Σ_p log p · (level-p sub-series).
#[allow(non_snake_case)]
pub fn weighted_S_levelwise(k: i64, index: &IndexData, p: u64, c_max: u64) -> Result<UnitRootSum> {
    let order = HalfOrder::from_weight(k)?;
    let w = OmegaWeight::new(p, index.m, index.d)?;
    let mut acc = Accumulator::new();
    for prime in w.primes() {
        let (s, _) = ordered_series(order, index, prime, 0, c_max, |_| 1.0);
        let lp = (prime as f64).ln();
        acc.add_sum(UnitRootSum::new(s.value * lp, s.err * lp));
    }
    Ok(acc.finish())
}

/// 𝒮 split at c ≤ C < c < K ≤ c; the last piece is summed to `secondary`
/// with a bound on the rest.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitSums {
    pub s_flat: UnitRootSum,
    pub s_star: UnitRootSum,
    pub s_sharp: UnitRootSum,
    pub sharp_tail: f64,
    pub c: u64,
    pub k: u64,
    pub secondary: u64,
}

impl SplitSums {
    pub fn total(&self) -> UnitRootSum {
        self.s_flat + self.s_star + self.s_sharp
    }
}

#[allow(non_snake_case)]
pub fn split_S(k: i64, index: &IndexData, p: u64, c: u64, big_k: u64, secondary: u64) -> Result<SplitSums> {
    let order = HalfOrder::from_weight(k)?;
    let abs_d = index.abs_d() as u128;
    let m = index.m as u128;
    if c == 0 || (c as u128) * m > abs_d || abs_d > big_k as u128 * m || secondary < big_k {
        return Err(Error::InvalidParams(format!(
            "need 0 < C ≤ |D|/m ≤ K ≤ secondary cutoff, got C = {c}, |D|/m = {}/{}, K = {big_k}, secondary = {secondary}",
            index.abs_d(),
            index.m
        )));
    }
    let w = OmegaWeight::new(p, index.m, index.d)?;
    let weight = |c: u64| w.at(c);
    let (s_flat, _) = ordered_series(order, index, 1, 0, c, weight);
    let (s_star, _) = ordered_series(order, index, 1, c, big_k.saturating_sub(1).max(c), weight);
    let (s_sharp, _) = ordered_series(order, index, 1, big_k.saturating_sub(1).max(c), secondary, weight);
    Ok(SplitSums {
        s_flat,
        s_star,
        s_sharp,
        sharp_tail: weighted_tail(k, index, secondary)?,
        c,
        k: big_k,
        secondary,
    })
}

fn check_a(index: &IndexData, a: u64, t: u64) -> Result<()> {
    if a == 0 || t == 0 {
        return Err(Error::InvalidArgument("a and t must be positive".into()));
    }
    let two_m_d = 2 * index.m as i128 * index.d as i128;
    let two_m_t = 2 * index.m as i128 * t as i128;
    if gcd(a as i128, two_m_d) != 1 || gcd(a as i128, two_m_t) != 1 {
        return Err(Error::PreconditionViolated(format!(
            "a = {a} must be coprime to 2mD = {two_m_d} and 2mt = {two_m_t}"
        )));
    }
    Ok(())
}

/// f(a,t) = ε₂·D·(1 + 2mt·(2mt)‾) + ε₁·a·ā·r² mod 2mta, with the inverses
/// lifted as (2mt)‾ + j₁·a and ā + j₂·2mt.
pub fn f_of_a_t_lifted(index: &IndexData, a: u64, t: u64, eps1: i64, eps2: i64, j1: i64, j2: i64) -> Result<Residue> {
    check_a(index, a, t)?;
    if eps1.abs() != 1 || eps2.abs() != 1 {
        return Err(Error::InvalidArgument("signs ε₁, ε₂ must be ±1".into()));
    }
    let two_mt = 2 * index.m as u64 * t;
    let modulus = two_mt * a;
    let inv_2mt = inverse_raw(two_mt as i128, a).expect("checked coprime") as i128 + j1 as i128 * a as i128;
    let inv_a = inverse_raw(a as i128, two_mt).expect("checked coprime") as i128 + j2 as i128 * two_mt as i128;
    let d = index.d as i128;
    let r2 = index.r as i128 * index.r as i128;
    let term1 = reduce(eps2 as i128 * d, modulus) as i128 * reduce(1 + two_mt as i128 * inv_2mt, modulus) as i128;
    let term2 = reduce(eps1 as i128 * a as i128 * inv_a, modulus) as i128 * reduce(r2, modulus) as i128;
    Ok(Residue::new(term1 + term2, modulus))
}

pub fn f_of_a_t(index: &IndexData, a: u64, t: u64, eps1: i64, eps2: i64) -> Result<Residue> {
    f_of_a_t_lifted(index, a, t, eps1, eps2, 0, 0)
}

/// Parameters of S_a(B).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SaParams {
    pub a: u64,
    pub t: u64,
    pub s: u64,
    /// Exclusive upper end of the b-range.
    pub b: u64,
    /// Lower threshold: b·a·t > C.
    pub c: u64,
    pub eps1: i64,
    pub eps2: i64,
    pub p: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SaSum {
    pub total: UnitRootSum,
    pub v_a: UnitRootSum,
    pub v_a_prime: UnitRootSum,
    pub omega_a: f64,
    pub term_count: u64,
    /// ω(ab) = ω(a) + ω(b) held on every term.
    pub decomposition_exact: bool,
}

/// S_a(B) = Σ ω(ab)(D/b) e(f(a,t)·b̄/(2mta)) over max(a, C/(at)) < b < B,
/// ab ≡ s mod 4t, (b, 2mDa) = 1; together with V_a and V'_a.
#[allow(non_snake_case)]
pub fn S_a_sum(index: &IndexData, prm: &SaParams) -> Result<SaSum> {
    let f = f_of_a_t(index, prm.a, prm.t, prm.eps1, prm.eps2)?;
    let w = OmegaWeight::new(prm.p, index.m, index.d)?;
    let modulus = f.modulus();
    let four_t = 4 * prm.t;
    let two_m_d_a = 2 * index.m as i128 * index.d as i128 * prm.a as i128;
    let omega_a = w.at(prm.a);
    let at = prm.a as u128 * prm.t as u128;
    let mut total = Accumulator::new();
    let mut v_a = Accumulator::new();
    let mut v_a_prime = Accumulator::new();
    let mut count = 0;
    let mut exact = true;
    for b in prm.a + 1..prm.b {
        if (b as u128) * at <= prm.c as u128 {
            continue;
        }
        if (prm.a as u128 * b as u128) % four_t as u128 != (prm.s % four_t) as u128 {
            continue;
        }
        if gcd(b as i128, two_m_d_a) != 1 {
            continue;
        }
        let chi = jacobi_unchecked(index.d as i128, b) as f64;
        let b_inv = inverse_raw(b as i128, modulus).expect("b coprime to 2mta");
        let phase = e_frac(f.value() as i128 * b_inv as i128, modulus) * chi;
        let omega_b = w.at(b);
        let omega_ab = w.at(prm.a * b);
        exact &= (omega_ab - omega_a - omega_b).abs() <= 1e-12 * (1.0 + omega_ab);
        total.add(phase * omega_ab);
        v_a.add(phase * omega_b);
        v_a_prime.add(phase);
        count += 1;
    }
    Ok(SaSum {
        total: total.finish(),
        v_a: v_a.finish(),
        v_a_prime: v_a_prime.finish(),
        omega_a,
        term_count: count,
        decomposition_exact: exact,
    })
}

/// One row of the V_a decay measurement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayRow {
    pub a: u64,
    pub t: u64,
    pub b: u64,
    pub v_a_abs: f64,
    pub term_count: u64,
}

/// |V_a| for every a ≤ a_max coprime to 2mD and every B in `bs`.
pub fn decay_rows(index: &IndexData, a_max: u64, t: u64, s: u64, bs: &[u64], c: u64, p: u64) -> Result<Vec<DecayRow>> {
    let mut rows = Vec::new();
    for a in 1..=a_max {
        if check_a(index, a, t).is_err() {
            continue;
        }
        for &b in bs {
            let prm = SaParams {
                a,
                t,
                s,
                b,
                c,
                eps1: 1,
                eps2: 1,
                p,
            };
            let sum = S_a_sum(index, &prm)?;
            rows.push(DecayRow {
                a,
                t,
                b,
                v_a_abs: sum.v_a.abs(),
                term_count: sum.term_count,
            });
        }
    }
    Ok(rows)
}

pub fn decay_csv(rows: &[DecayRow]) -> String {
    let mut out = String::from("a,t,B,abs_V_a,term_count\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{},{:e},{}", r.a, r.t, r.b, r.v_a_abs, r.term_count);
    }
    out
}
