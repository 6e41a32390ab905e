//! Exact-rational bookkeeping of the parameter choice P, C, K, T and the
//! resulting exponents of the normalized coefficient bound.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn serialize_rational<S: Serializer>(x: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

fn serialize_rationals<S: Serializer>(xs: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(|x| x.to_string()))
}

/// Parse "p/q" or an integer. Decimal and exponent notation are rejected.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let t = text.trim();
    let bad = || Error::InvalidArgument(format!("expected a rational p/q, got {text:?}"));
    if t.is_empty() || t.contains(['.', 'e', 'E']) {
        return Err(bad());
    }
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (t, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| bad())?;
    let den = BigInt::from_str(den).map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

/// Which of the two final case bounds dominates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    #[serde(rename = "LOW")]
    Low,
    #[serde(rename = "HIGH")]
    High,
}

/// Exponents of P, C, K, T. C, K, T are measured in |D|/m; P is given in |D|.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProofParams {
    #[serde(serialize_with = "serialize_rational")]
    pub sigma: BigRational,
    #[serde(serialize_with = "serialize_rational")]
    pub delta: BigRational,
    #[serde(serialize_with = "serialize_rational")]
    pub p_exp: BigRational,
    #[serde(serialize_with = "serialize_rational")]
    pub c_exp: BigRational,
    #[serde(serialize_with = "serialize_rational")]
    pub k_exp: BigRational,
    #[serde(serialize_with = "serialize_rational")]
    pub t_exp: BigRational,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EndgameReport {
    pub params: ProofParams,
    #[serde(serialize_with = "serialize_rational")]
    pub delta: BigRational,
    /// Exponent of |D| in the final bound, max of the two case lines.
    #[serde(serialize_with = "serialize_rational")]
    pub exponent: BigRational,
    #[serde(serialize_with = "serialize_rational")]
    pub low_exponent: BigRational,
    #[serde(serialize_with = "serialize_rational")]
    pub high_exponent: BigRational,
    pub regime: Regime,
    /// σ ≤ (1 + 15δ)/(4 + 15δ), the stated condition for P ≥ T.
    pub p_ge_t: bool,
    #[serde(serialize_with = "serialize_rational")]
    pub p_ge_t_bound: BigRational,
    #[serde(serialize_with = "serialize_rational")]
    pub p_ge_t_threshold: BigRational,
    /// P ≥ T evaluated directly on the printed choice of P.
    pub printed_p_ge_t: bool,
    /// |D|-exponents of the four terms before choosing P, at the printed P.
    #[serde(serialize_with = "serialize_rationals")]
    pub before_p_terms: Vec<BigRational>,
}

pub fn sigma_max() -> BigRational {
    q(7, 25)
}

pub fn crossover() -> BigRational {
    q(21, 155)
}

pub fn p_ge_t_threshold() -> BigRational {
    q(39, 121)
}

fn check_sigma(sigma: &BigRational) -> Result<()> {
    if sigma.is_negative() || *sigma > sigma_max() {
        return Err(Error::OutOfRegime(sigma.to_string()));
    }
    Ok(())
}

/// δ = (3 − 5σ) / (72(1 − σ)).
pub fn delta_of(sigma: &BigRational) -> BigRational {
    (q(3, 1) - q(5, 1) * sigma) / (q(72, 1) * (BigRational::one() - sigma))
}

pub fn low_case(sigma: &BigRational) -> BigRational {
    q(5, 72) * sigma - q(3, 72)
}

pub fn high_case(sigma: &BigRational) -> BigRational {
    q(25, 112) * sigma - q(1, 16)
}

/// −(1 − 25σ/7)/24, the interpolated exponent.
pub fn theorem_exponent(sigma: &BigRational) -> BigRational {
    -(BigRational::one() - q(25, 7) * sigma) / q(24, 1)
}

/// The stated condition for P ≥ T: σ ≤ (1 + 15δ)/(4 + 15δ) with δ = δ(σ).
/// Defined for every σ < 1, not only inside the regime.
pub fn p_ge_t_condition(sigma: &BigRational) -> bool {
    let fifteen_delta = q(15, 1) * delta_of(sigma);
    *sigma <= (BigRational::one() + &fifteen_delta) / (q(4, 1) + fifteen_delta)
}

pub fn endgame_exponent(sigma: &BigRational) -> Result<EndgameReport> {
    check_sigma(sigma)?;
    let one = BigRational::one();
    let delta = delta_of(sigma);
    let x = &one - sigma; // exponent of |D|/m in |D|
    let p_exp = -q(3, 10) * sigma + &x * (q(1, 10) + q(2, 5) * &delta);
    let t_in_d = &x * &delta;
    let low = low_case(sigma);
    let high = high_case(sigma);
    let (exponent, regime) = if *sigma <= crossover() {
        (low.clone(), Regime::Low)
    } else {
        (high.clone(), Regime::High)
    };
    let fifteen_delta = q(15, 1) * &delta;
    let bound = (&one + &fifteen_delta) / (q(4, 1) + &fifteen_delta);
    let before_p_terms = vec![
        -&delta * &x,
        q(3, 10) * sigma + &p_exp / q(5, 1) + &x * (q(21, 10) * &delta - q(1, 10)),
        -&p_exp / q(2, 1) + &x * (q(5, 2) * &delta),
        sigma / q(4, 1) + &p_exp / q(2, 1) + &x * (q(2, 1) * &delta - q(1, 8)),
    ];
    Ok(EndgameReport {
        params: ProofParams {
            sigma: sigma.clone(),
            delta: delta.clone(),
            p_exp: p_exp.clone(),
            c_exp: &one - &delta,
            k_exp: &one + &delta,
            t_exp: delta.clone(),
        },
        delta,
        exponent,
        low_exponent: low,
        high_exponent: high,
        regime,
        p_ge_t: *sigma <= bound,
        p_ge_t_bound: bound,
        p_ge_t_threshold: p_ge_t_threshold(),
        printed_p_ge_t: p_exp >= t_in_d,
        before_p_terms,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremCheck {
    #[serde(serialize_with = "serialize_rational")]
    pub sigma: BigRational,
    #[serde(serialize_with = "serialize_rational")]
    pub theorem: BigRational,
    #[serde(serialize_with = "serialize_rational")]
    pub case: BigRational,
    /// theorem ≥ case
    pub holds: bool,
    pub equal: bool,
}

pub fn theorem_exponent_check(sigma: &BigRational) -> Result<TheoremCheck> {
    let rep = endgame_exponent(sigma)?;
    let theorem = theorem_exponent(sigma);
    Ok(TheoremCheck {
        sigma: sigma.clone(),
        holds: theorem >= rep.exponent,
        equal: theorem == rep.exponent,
        theorem,
        case: rep.exponent,
    })
}

/// σ ∈ {0, 1/100, ..., 28/100}.
pub fn sigma_grid() -> Vec<BigRational> {
    (0..=28).map(|i| q(i, 100)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_points() {
        let r0 = endgame_exponent(&q(0, 1)).unwrap();
        assert_eq!(r0.delta, q(1, 24));
        assert_eq!(r0.exponent, q(-1, 24));
        assert_eq!(r0.regime, Regime::Low);
        let rc = endgame_exponent(&crossover()).unwrap();
        assert_eq!(rc.low_exponent, q(-1, 31));
        assert_eq!(rc.high_exponent, q(-1, 31));
        let rm = endgame_exponent(&sigma_max()).unwrap();
        assert_eq!(rm.exponent, q(0, 1));
        assert_eq!(rm.regime, Regime::High);
    }

    #[test]
    fn p_ge_t_boundary_is_39_over_121() {
        let t = p_ge_t_threshold();
        // The bound (1+15δ)/(4+15δ) equals σ exactly at the threshold.
        let delta = delta_of(&t);
        let fifteen = q(15, 1) * &delta;
        assert_eq!((q(1, 1) + &fifteen) / (q(4, 1) + &fifteen), t);
        // Inside [0, 7/25] the condition always holds since 7/25 < 39/121.
        assert!(sigma_max() < t);
        let eps = q(1, 10_000);
        assert!(p_ge_t_condition(&t));
        assert!(p_ge_t_condition(&(&t - &eps)));
        assert!(!p_ge_t_condition(&(&t + &eps)));
        for s in sigma_grid() {
            assert!(endgame_exponent(&s).unwrap().p_ge_t);
        }
    }

    #[test]
    fn printed_p_choice_meets_t_only_below_9_over_43() {
        assert!(endgame_exponent(&q(9, 43)).unwrap().printed_p_ge_t);
        assert!(endgame_exponent(&q(20, 100)).unwrap().printed_p_ge_t);
        assert!(!endgame_exponent(&q(21, 100)).unwrap().printed_p_ge_t);
        let s = q(9, 43);
        let r = endgame_exponent(&s).unwrap();
        assert_eq!(r.params.p_exp, (q(1, 1) - &s) * &r.delta);
    }

    #[test]
    fn theorem_interpolates_the_cases() {
        for s in sigma_grid() {
            let c = theorem_exponent_check(&s).unwrap();
            assert!(c.holds, "σ = {s}");
            assert_eq!(c.equal, s == q(0, 1) || s == sigma_max(), "σ = {s}");
        }
        let c = theorem_exponent_check(&crossover()).unwrap();
        assert_eq!(c.theorem, q(-2, 93));
        assert!(c.holds && !c.equal);
        assert!(theorem_exponent_check(&sigma_max()).unwrap().equal);
    }

    #[test]
    fn regime_bounds() {
        assert!(matches!(endgame_exponent(&q(-1, 100)), Err(Error::OutOfRegime(_))));
        assert!(matches!(endgame_exponent(&q(29, 100)), Err(Error::OutOfRegime(_))));
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("21/155").unwrap(), q(21, 155));
        assert_eq!(parse_rational(" -3 ").unwrap(), q(-3, 1));
        assert!(parse_rational("0.1").is_err());
        assert!(parse_rational("1e-3").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn piecewise_linear_and_continuous() {
        let eps = q(1, 1_000_000);
        let c = crossover();
        let below = endgame_exponent(&(&c - &eps)).unwrap();
        let above = endgame_exponent(&(&c + &eps)).unwrap();
        assert_eq!(below.regime, Regime::Low);
        assert_eq!(above.regime, Regime::High);
        assert!(below.low_exponent > below.high_exponent);
        assert!(above.high_exponent > above.low_exponent);
        assert_eq!(&above.exponent - &below.exponent, q(25, 112) * &eps + q(5, 72) * &eps);
    }
}
