//! The Kloosterman-type sums H^±_{m,c}(n, r) attached to Jacobi forms.
//!
//! Four evaluators are provided and cross-checked against each other:
//!
//! * [`h_brute`]: the defining double sum over ρ (units mod c) and λ (mod c).
//!   This is the trust anchor; it costs O(c²).
//! * [`h_closed_coprime`]: the Salié-type closed form for gcd(c, 2mD) = 1,
//!   a sum over the square roots of unity mod c.
//! * [`h_reduced`]: the ρ-sum with the inner λ-sum replaced by the exact
//!   evaluation of the quadratic exponential sum G(a, b; p^s), modulus split
//!   into prime powers via CRT. Costs O(c) and handles every modulus,
//!   including powers of 2.
//! * [`h_fast`]: splits c = q·t with t | (2mD)^∞ and multiplies the closed
//!   form on q by a direct evaluation on t.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modarith::{
    epsilon, epsilon_squared, factorize, gcd, inverse_raw, is_squarefree, jacobi_unchecked, mul_mod, reduce, tau,
    Residue,
};
use crate::sum::{e_frac, Accumulator, UnitRootSum, UnitRoots};

/// The sign ± in H^±.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

impl FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+" | "plus" | "p" => Ok(Sign::Plus),
            "-" | "minus" | "m" => Ok(Sign::Minus),
            _ => Err(Error::InvalidArgument(format!("sign must be + or -, got {s:?}"))),
        }
    }
}

/// Index data (m, n, r) with negative discriminant D = r² − 4mn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IndexData {
    pub m: i64,
    pub n: i64,
    pub r: i64,
    pub d: i64,
    pub fundamental: bool,
}

impl IndexData {
    pub fn new(m: i64, n: i64, r: i64) -> Result<Self> {
        if m < 1 {
            return Err(Error::InvalidArgument(format!("index m must be positive, got {m}")));
        }
        if n < 1 {
            return Err(Error::InvalidArgument(format!("n must be positive, got {n}")));
        }
        let d = r as i128 * r as i128 - 4 * m as i128 * n as i128;
        if d >= 0 {
            return Err(Error::InvalidArgument(format!(
                "discriminant r^2 - 4mn = {d} must be negative"
            )));
        }
        let d = i64::try_from(d).map_err(|_| Error::InvalidArgument("discriminant out of range".into()))?;
        Ok(Self {
            m,
            n,
            r,
            d,
            fundamental: is_fundamental(d),
        })
    }

    pub fn abs_d(&self) -> u64 {
        self.d.unsigned_abs()
    }
}

/// Whether D < 0 is a fundamental discriminant.
pub fn is_fundamental(d: i64) -> bool {
    if d >= 0 {
        return false;
    }
    match d.rem_euclid(4) {
        1 => is_squarefree(d.unsigned_abs()),
        0 => {
            let q = d / 4;
            matches!(q.rem_euclid(4), 2 | 3) && is_squarefree(q.unsigned_abs())
        }
        _ => false,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HSumRequest {
    pub index: IndexData,
    pub c: u64,
    pub sign: Sign,
}

impl HSumRequest {
    pub fn new(index: IndexData, c: u64, sign: Sign) -> Result<Self> {
        if c == 0 {
            return Err(Error::InvalidArgument("modulus c must be positive".into()));
        }
        Ok(Self { index, c, sign })
    }
}

/// Raw arguments of H^±_{m,c}(n, r). Twisted arguments produced by the
/// factorization identity need not have negative discriminant, so the
/// internal evaluators work on these rather than on [`IndexData`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct RawArgs {
    pub m: i128,
    pub n: i128,
    pub r: i128,
}

impl From<&IndexData> for RawArgs {
    fn from(ix: &IndexData) -> Self {
        RawArgs {
            m: ix.m as i128,
            n: ix.n as i128,
            r: ix.r as i128,
        }
    }
}

impl RawArgs {
    fn disc(&self) -> i128 {
        self.r * self.r - 4 * self.m * self.n
    }

    /// Arguments of the factor living on `part` in H_{m, part·rest}:
    /// (m·rest, n·rest⁻¹ mod part, r).
    fn twist(&self, part: u64, rest: u64) -> RawArgs {
        let inv = inverse_raw(rest as i128, part).expect("coprime split");
        RawArgs {
            m: reduce(self.m * rest as i128, part) as i128,
            n: mul_mod(reduce(self.n, part), inv, part) as i128,
            r: reduce(self.r, part) as i128,
        }
    }
}

/// Direct double summation of the defining sum; O(c²) terms.
pub fn h_brute(req: &HSumRequest) -> UnitRootSum {
    h_brute_raw(RawArgs::from(&req.index), req.c, req.sign)
}

pub(crate) fn h_brute_raw(args: RawArgs, c: u64, sign: Sign) -> UnitRootSum {
    if c == 1 {
        return UnitRootSum::one();
    }
    let roots = UnitRoots::new(c);
    let m = reduce(args.m, c);
    let n = reduce(args.n, c);
    let r = reduce(args.r, c);
    let mut outer = Accumulator::new();
    for rho in 1..c {
        let Some(rb) = inverse_raw(rho as i128, c) else {
            continue;
        };
        let a = mul_mod(m, rb, c);
        let shifted = match sign {
            Sign::Plus => (rb + 1) % c,
            Sign::Minus => (rb + c - 1) % c,
        };
        let b = mul_mod(r, shifted, c);
        // phase(λ) = aλ² + bλ, stepped by phase(λ+1) − phase(λ) = a(2λ+1) + b.
        let mut inner = Accumulator::new();
        let mut phase = 0u64;
        let mut step = (a + b) % c;
        let two_a = (2 * a) % c;
        for _ in 0..c {
            inner.add(roots.at(phase));
            phase = (phase + step) % c;
            step = (step + two_a) % c;
        }
        let twist = roots.at(mul_mod(n, (rb + rho) % c, c));
        let s = inner.finish();
        outer.add_sum(UnitRootSum::new(s.value * twist, s.err));
    }
    outer.finish()
}

/// Exact value of the quadratic exponential sum Σ_{λ mod p^s} e((aλ² + bλ)/p^s).
pub fn quadratic_sum_prime_power(a: u64, b: u64, p: u64, s: u32) -> Complex64 {
    let q = p.pow(s);
    let (a, b) = (a % q, b % q);
    let mut e = 0u32;
    let mut pe = 1u64;
    while e < s && a % (pe * p) == 0 {
        e += 1;
        pe *= p;
    }
    if e == s {
        return if b == 0 {
            Complex64::new(q as f64, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        };
    }
    if b % pe != 0 {
        return Complex64::new(0.0, 0.0);
    }
    let (q1, a1, b1, s1) = (q / pe, a / pe, b / pe, s - e);
    let g = if p == 2 {
        quadratic_sum_two_power(a1, b1, s1)
    } else {
        let inv4a = inverse_raw(4 * a1 as i128, q1).expect("unit");
        let phase = -(mul_mod(mul_mod(b1, b1, q1), inv4a, q1) as i128);
        epsilon(q1) * jacobi_unchecked(a1 as i128, q1) as f64 * (q1 as f64).sqrt() * e_frac(phase, q1)
    };
    g * pe as f64
}

/// Σ_{λ mod 2^s} e((aλ² + bλ)/2^s) for odd a and s ≥ 1.
fn quadratic_sum_two_power(a: u64, b: u64, s: u32) -> Complex64 {
    debug_assert!(a % 2 == 1 && s >= 1);
    let q = 1u64 << s;
    if b % 2 == 1 {
        // λ → λ + 2^{s−1} flips the sign for s ≥ 2.
        return if s == 1 {
            Complex64::new(2.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        };
    }
    if s == 1 {
        return Complex64::new(0.0, 0.0);
    }
    let beta = b / 2;
    let inv_a = inverse_raw(a as i128, q).expect("odd");
    let phase = -(mul_mod(mul_mod(beta, beta, q), inv_a, q) as i128);
    // Σ e(aλ²/2^s) = (1 + i^a)·(2/a)^s·2^{s/2}
    let i_pow = match a % 4 {
        1 => Complex64::new(0.0, 1.0),
        _ => Complex64::new(0.0, -1.0),
    };
    let kron2 = if matches!(a % 8, 1 | 7) { 1.0 } else { -1.0 };
    let sign = if s % 2 == 1 { kron2 } else { 1.0 };
    (Complex64::new(1.0, 0.0) + i_pow) * sign * (q as f64).sqrt() * e_frac(phase, q)
}

/// O(c) evaluation of H via exact inner quadratic sums at each prime power.
pub fn h_reduced(req: &HSumRequest) -> UnitRootSum {
    h_reduced_raw(RawArgs::from(&req.index), req.c, req.sign)
}

pub(crate) fn h_reduced_raw(args: RawArgs, c: u64, sign: Sign) -> UnitRootSum {
    let mut out = UnitRootSum::one();
    for (p, e) in factorize(c) {
        let part = p.pow(e);
        let piece = h_prime_power_raw(args.twist(part, c / part), p, e, sign);
        out = out * piece;
    }
    out
}

fn h_prime_power_raw(args: RawArgs, p: u64, s: u32, sign: Sign) -> UnitRootSum {
    let q = p.pow(s);
    let m = reduce(args.m, q);
    let n = reduce(args.n, q);
    let r = reduce(args.r, q);
    let mut acc = Accumulator::new();
    for rho in 1..q {
        if rho % p == 0 {
            continue;
        }
        let rb = inverse_raw(rho as i128, q).expect("unit");
        let shifted = match sign {
            Sign::Plus => (rb + 1) % q,
            Sign::Minus => (rb + q - 1) % q,
        };
        let g = quadratic_sum_prime_power(mul_mod(m, rb, q), mul_mod(r, shifted, q), p, s);
        if g.re == 0.0 && g.im == 0.0 {
            continue;
        }
        acc.add(g * e_frac(mul_mod(n, (rb + rho) % q, q) as i128, q));
    }
    acc.finish()
}

/// All v mod q with v² ≡ 1 (mod q), ascending. For q = 1 this is [0].
pub fn unit_solutions(q: u64) -> Vec<Residue> {
    assert!(q > 0, "modulus must be positive");
    let mut sols: Vec<u64> = vec![0];
    let mut modulus = 1u64;
    for (p, e) in factorize(q) {
        let pe = p.pow(e);
        let local: Vec<u64> = if p == 2 {
            match e {
                1 => vec![1],
                2 => vec![1, 3],
                _ => vec![1, pe / 2 - 1, pe / 2 + 1, pe - 1],
            }
        } else {
            vec![1, pe - 1]
        };
        // CRT: x ≡ s mod modulus, x ≡ l mod pe.
        let inv = inverse_raw(modulus as i128, pe).expect("coprime");
        let next = modulus * pe;
        let mut combined = Vec::with_capacity(sols.len() * local.len());
        for &s in &sols {
            for &l in &local {
                let k = mul_mod(reduce(l as i128 - s as i128, pe), inv, pe);
                combined.push((s + modulus * k) % next);
            }
        }
        sols = combined;
        modulus = next;
    }
    sols.sort_unstable();
    sols.into_iter().map(|v| Residue::new(v as i128, q)).collect()
}

/// Closed-form evaluation for gcd(c, 2mD) = 1:
/// ε_c²·c·(−D/c)·Σ_{v² ≡ 1 mod c} e((2m)⁻¹·(Dv ∓ r²)/c).
pub fn h_closed_coprime(req: &HSumRequest) -> Result<UnitRootSum> {
    let ix = &req.index;
    let bad = 2 * ix.m as i128 * ix.d as i128;
    if gcd(req.c as i128, bad) != 1 {
        return Err(Error::PreconditionViolated(format!(
            "closed form needs gcd(c, 2mD) = 1; c = {}, 2mD = {bad}",
            req.c
        )));
    }
    Ok(h_closed_raw(RawArgs::from(ix), req.c, req.sign))
}

pub(crate) fn h_closed_raw(args: RawArgs, c: u64, sign: Sign) -> UnitRootSum {
    if c == 1 {
        return UnitRootSum::one();
    }
    let d = args.disc();
    let inv2m = inverse_raw(2 * args.m, c).expect("gcd(c, 2m) = 1");
    let base = mul_mod(inv2m, reduce(d, c), c);
    let shift = mul_mod(inv2m, reduce(args.r * args.r, c), c) as i128;
    let mut acc = Accumulator::new();
    for v in unit_solutions(c) {
        let phase = mul_mod(base, v.value(), c) as i128 - sign.as_i64() as i128 * shift;
        acc.add(e_frac(phase, c));
    }
    let factor = (epsilon_squared(c) * jacobi_unchecked(-d, c)) as f64 * c as f64;
    acc.finish().scale(Complex64::new(factor, 0.0))
}

/// Both sides of the CRT factorization
/// H_{m,c1c2}(n, r) = H_{mc1,c2}(n·c1⁻¹, r)·H_{mc2,c1}(n·c2⁻¹, r), by brute force.
pub fn h_factor_sides(index: &IndexData, c1: u64, c2: u64, sign: Sign) -> Result<(UnitRootSum, UnitRootSum)> {
    if c1 == 0 || c2 == 0 {
        return Err(Error::InvalidArgument("moduli must be positive".into()));
    }
    if gcd(c1 as i128, c2 as i128) != 1 {
        return Err(Error::PreconditionViolated(format!("gcd({c1}, {c2}) > 1")));
    }
    let args = RawArgs::from(index);
    let lhs = h_brute_raw(args, c1 * c2, sign);
    let on_c2 = h_brute_raw(args.twist(c2, c1), c2, sign);
    let on_c1 = h_brute_raw(args.twist(c1, c2), c1, sign);
    Ok((lhs, on_c2 * on_c1))
}

pub fn h_factor_check(index: &IndexData, c1: u64, c2: u64, sign: Sign) -> Result<bool> {
    let (lhs, rhs) = h_factor_sides(index, c1, c2, sign)?;
    Ok(lhs.agrees_with(&rhs, 0.0))
}

/// Tuning for [`h_fast`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FastConfig {
    /// Largest bad part t evaluated by the O(t²) double sum; larger t go
    /// through the O(t) Gauss-reduced evaluator.
    pub brute_t_max: u64,
}

impl Default for FastConfig {
    fn default() -> Self {
        Self { brute_t_max: 64 }
    }
}

/// Split c = q·t with t supported on the primes of 2mD and gcd(q, 2mD) = 1.
pub fn bad_split(c: u64, m: i64, d: i64) -> (u64, u64) {
    let bad = 2 * m.unsigned_abs() as u128 * d.unsigned_abs() as u128;
    let mut q = 1u64;
    let mut t = 1u64;
    for (p, e) in factorize(c) {
        if bad % p as u128 == 0 {
            t *= p.pow(e);
        } else {
            q *= p.pow(e);
        }
    }
    (q, t)
}

pub fn h_fast(req: &HSumRequest) -> UnitRootSum {
    h_fast_with(req, &FastConfig::default())
}

pub fn h_fast_with(req: &HSumRequest, cfg: &FastConfig) -> UnitRootSum {
    let ix = &req.index;
    let (q, t) = bad_split(req.c, ix.m, ix.d);
    h_fast_split(RawArgs::from(ix), q, t, req.sign, cfg)
}

pub(crate) fn h_fast_split(args: RawArgs, q: u64, t: u64, sign: Sign, cfg: &FastConfig) -> UnitRootSum {
    let bad_part = |a: RawArgs| {
        if t <= cfg.brute_t_max {
            h_brute_raw(a, t, sign)
        } else {
            h_reduced_raw(a, t, sign)
        }
    };
    match (q, t) {
        (_, 1) => h_closed_raw(args, q, sign),
        (1, _) => bad_part(args),
        _ => h_closed_raw(args.twist(q, t), q, sign) * bad_part(args.twist(t, q)),
    }
}

/// The explicit Weil-type bound and its evaluation on one request.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeilReport {
    pub abs: f64,
    pub err: f64,
    /// τ(c)·c·(c, m, r)^{1/2}·(c, D')^{1/2} with D' = D/(m, r).
    pub general_bound: f64,
    /// τ(c)·c·(c, D)^{1/2}, only for fundamental D.
    pub fundamental_bound: Option<f64>,
    pub pass: bool,
}

pub fn weil_report(req: &HSumRequest) -> WeilReport {
    weil_report_for(req, h_fast(req))
}

pub fn weil_report_for(req: &HSumRequest, h: UnitRootSum) -> WeilReport {
    let ix = &req.index;
    let c = req.c as i128;
    let g_mr = gcd(ix.m as i128, ix.r as i128);
    let d_prime = ix.d as i128 / g_mr as i128;
    let base = tau(req.c) as f64 * req.c as f64;
    let general_bound =
        base * (gcd(gcd(c, ix.m as i128) as i128, ix.r as i128) as f64).sqrt() * (gcd(c, d_prime) as f64).sqrt();
    let fundamental_bound = ix.fundamental.then(|| base * (gcd(c, ix.d as i128) as f64).sqrt());
    let abs = h.abs();
    let within = |b: f64| abs <= b + h.err + 1e-9 * b;
    let pass = within(general_bound) && fundamental_bound.map_or(true, within);
    WeilReport {
        abs,
        err: h.err,
        general_bound,
        fundamental_bound,
        pass,
    }
}

pub fn weil_check(req: &HSumRequest) -> bool {
    weil_report(req).pass
}
