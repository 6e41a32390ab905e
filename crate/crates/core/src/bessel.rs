//! Half-integer order Bessel functions J_{k−3/2} for even weight k ≥ 4.
//!
//! For x ≥ ν the value comes from the elementary J_{±1/2} and the upward
//! three-term recurrence; below ν, where the recurrence loses about a digit
//! per step, from the ascending series with an alternating-tail remainder.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Order ν = k − 3/2 attached to an even weight k ≥ 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HalfOrder {
    k: i64,
}

impl HalfOrder {
    pub fn from_weight(k: i64) -> Result<Self> {
        if k < 4 || k % 2 != 0 {
            return Err(Error::UnsupportedOrder(k));
        }
        Ok(Self { k })
    }

    pub fn weight(&self) -> i64 {
        self.k
    }

    /// ν as a float.
    pub fn nu(&self) -> f64 {
        self.k as f64 - 1.5
    }

    /// ν = l + 1/2.
    fn l(&self) -> u32 {
        (self.k - 2) as u32
    }
}

/// Γ(n + 1/2) / √π = (2n − 1)!! / 2^n, exactly.
pub fn gamma_half_over_sqrt_pi(n: u32) -> BigRational {
    let mut acc = BigRational::one();
    for j in 1..=n {
        acc *= BigRational::new(BigInt::from(2 * j - 1), BigInt::from(2));
    }
    acc
}

/// Γ(n + 1/2) as a float via its exact rational multiple of √π.
pub fn gamma_half(n: u32) -> f64 {
    gamma_half_over_sqrt_pi(n).to_f64().expect("finite") * PI.sqrt()
}

/// Γ(ν + 1) for the given order.
pub fn gamma_nu_plus_one(order: HalfOrder) -> f64 {
    // ν + 1 = (l + 1) + 1/2
    gamma_half(order.l() + 1)
}

fn check_x(x: f64) -> Result<()> {
    if x.is_nan() || x <= 0.0 || x.is_infinite() {
        return Err(Error::InvalidArgument(format!(
            "Bessel argument must be positive, got {x}"
        )));
    }
    Ok(())
}

/// J_ν(x) for ν = k − 3/2.
pub fn bessel_half(order: HalfOrder, x: f64) -> Result<f64> {
    check_x(x)?;
    Ok(bessel_unchecked(order, x))
}

#[inline]
pub(crate) fn bessel_unchecked(order: HalfOrder, x: f64) -> f64 {
    if x < order.nu() {
        series_branch(order.l(), x).value
    } else {
        recurrence_branch(order.l(), x)
    }
}

/// J_{l+1/2}(x) by upward recurrence from J_{−1/2} and J_{1/2}.
pub fn bessel_recurrence(order: HalfOrder, x: f64) -> Result<f64> {
    check_x(x)?;
    Ok(recurrence_branch(order.l(), x))
}

fn recurrence_branch(l: u32, x: f64) -> f64 {
    let pref = (2.0 / (PI * x)).sqrt();
    let (s, c) = x.sin_cos();
    let mut prev = pref * c; // J_{−1/2}
    let mut cur = pref * s; // J_{1/2}
    for j in 0..l {
        let nu = j as f64 + 0.5;
        let next = (2.0 * nu / x) * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Series value with a bound on the discarded tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesEval {
    pub value: f64,
    pub remainder: f64,
}

/// J_ν(x) from the ascending series Σ (−1)^j (x/2)^{2j+ν} / (j! Γ(j+ν+1)).
pub fn bessel_series(order: HalfOrder, x: f64) -> Result<SeriesEval> {
    check_x(x)?;
    Ok(series_branch(order.l(), x))
}

fn series_branch(l: u32, x: f64) -> SeriesEval {
    // J = t0 · Σ_j s_j with s_0 = 1 and s_{j+1} = −s_j·(x²/4)/((j+1)(j+1+ν)).
    // Near x ≈ 2ν the partial sums cancel by many orders of magnitude, so the
    // normalized series runs in double-double.
    let nu = l as f64 + 0.5;
    let t0 = (x / 2.0).powf(nu) / gamma_half(l + 1);
    let quarter_sq = Dd::two_prod(x, x).scale(0.25);
    let mut term = Dd::from(1.0);
    let mut sum = Dd::from(0.0);
    let mut j = 0u32;
    loop {
        sum = sum.add(term);
        let denom = (j as f64 + 1.0) * (j as f64 + 1.0 + nu);
        let next = term.mul(quarter_sq).div_f64(-denom);
        // Once the ratio drops below one the series alternates with
        // decreasing terms, so the first omitted term bounds the tail.
        let decreasing = quarter_sq.hi < denom;
        if decreasing && next.hi.abs() <= 1e-34 * sum.hi.abs().max(f64::MIN_POSITIVE) {
            return SeriesEval {
                value: t0 * sum.hi + t0 * sum.lo,
                remainder: (t0 * next.hi).abs(),
            };
        }
        term = next;
        j += 1;
        if j > 10_000 {
            return SeriesEval {
                value: t0 * sum.hi,
                remainder: (t0 * term.hi).abs(),
            };
        }
    }
}

/// Unevaluated sum hi + lo with |lo| ≤ ulp(hi)/2.
#[derive(Debug, Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl From<f64> for Dd {
    fn from(hi: f64) -> Self {
        Dd { hi, lo: 0.0 }
    }
}

impl Dd {
    fn two_sum(a: f64, b: f64) -> Dd {
        let s = a + b;
        let bb = s - a;
        Dd {
            hi: s,
            lo: (a - (s - bb)) + (b - bb),
        }
    }

    fn two_prod(a: f64, b: f64) -> Dd {
        let p = a * b;
        Dd {
            hi: p,
            lo: a.mul_add(b, -p),
        }
    }

    fn renorm(hi: f64, lo: f64) -> Dd {
        let s = hi + lo;
        Dd {
            hi: s,
            lo: lo - (s - hi),
        }
    }

    fn add(self, o: Dd) -> Dd {
        let s = Dd::two_sum(self.hi, o.hi);
        let t = Dd::two_sum(self.lo, o.lo);
        let hi = Dd::renorm(s.hi, s.lo + t.hi);
        Dd::renorm(hi.hi, hi.lo + t.lo)
    }

    fn mul(self, o: Dd) -> Dd {
        let p = Dd::two_prod(self.hi, o.hi);
        Dd::renorm(p.hi, p.lo + (self.hi * o.lo + self.lo * o.hi))
    }

    /// Exact scaling by a power of two.
    fn scale(self, f: f64) -> Dd {
        Dd {
            hi: self.hi * f,
            lo: self.lo * f,
        }
    }

    fn div_f64(self, d: f64) -> Dd {
        let q1 = self.hi / d;
        let p = Dd::two_prod(q1, d);
        let r = Dd::two_sum(self.hi, -p.hi);
        let q2 = (r.hi + (r.lo - p.lo + self.lo)) / d;
        Dd::renorm(q1, q2)
    }
}

/// (x/2)^ν / Γ(ν + 1), a rigorous bound on |J_ν(x)| for all x > 0.
pub fn power_bound(order: HalfOrder, x: f64) -> f64 {
    (x / 2.0).powf(order.nu()) / gamma_nu_plus_one(order)
}

/// Empirical constant C_ν with |J_ν(x)| ≤ C_ν·x^{−1/2} for x ≥ 1: the
/// supremum of x^{1/2}|J_ν(x)| on a fine grid over [1, 2000] plus 10%.
pub fn decay_constant(order: HalfOrder) -> f64 {
    static CACHE: OnceLock<Mutex<HashMap<i64, f64>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(&v) = cache.lock().expect("poisoned").get(&order.k) {
        return v;
    }
    let mut sup = 0.0f64;
    let steps = 200_000;
    for i in 0..=steps {
        let x = 1.0 + 1999.0 * i as f64 / steps as f64;
        sup = sup.max(x.sqrt() * bessel_unchecked(order, x).abs());
    }
    let value = sup * 1.1;
    cache.lock().expect("poisoned").insert(order.k, value);
    value
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub x: f64,
    pub value: f64,
    pub power_bound: f64,
    pub decay_bound: Option<f64>,
    pub power_ok: bool,
    pub decay_ok: bool,
}

impl BoundCheck {
    pub fn pass(&self) -> bool {
        self.power_ok && self.decay_ok
    }
}

pub fn bound_report(order: HalfOrder, x: f64) -> Result<BoundCheck> {
    check_x(x)?;
    let value = bessel_unchecked(order, x);
    let pb = power_bound(order, x);
    // Near x → 0 the two sides agree to within rounding.
    let power_ok = value.abs() <= pb * (1.0 + 8.0 * f64::EPSILON);
    let decay_bound = (x >= 1.0).then(|| decay_constant(order) / x.sqrt());
    let decay_ok = decay_bound.map_or(true, |b| value.abs() <= b);
    Ok(BoundCheck {
        x,
        value,
        power_bound: pb,
        decay_bound,
        power_ok,
        decay_ok,
    })
}

pub fn bessel_bound_check(order: HalfOrder, x: f64) -> Result<bool> {
    Ok(bound_report(order, x)?.pass())
}
