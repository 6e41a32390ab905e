//! Exact two-variable Laurent series in q and ζ with fractional exponent
//! offsets.
//!
//! A series stores integer exponent pairs (a, b) meaning
//! `q^{q_offset + a/q_unit} · ζ^{zeta_offset + b}`, with exact rational
//! coefficients. It is known exactly for all absolute q-exponents strictly
//! below `cutoff`; products and quotients propagate that bound.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct LaurentSeries {
    coeffs: BTreeMap<(i64, i64), BigRational>,
    q_offset: Rational64,
    zeta_offset: Rational64,
    q_unit: i64,
    cutoff: Rational64,
}

impl LaurentSeries {
    /// Build from (a, b, coefficient) triples.
    pub fn from_terms(
        terms: impl IntoIterator<Item = (i64, i64, BigRational)>,
        q_offset: Rational64,
        zeta_offset: Rational64,
        q_unit: i64,
        cutoff: Rational64,
    ) -> Self {
        assert!(q_unit > 0);
        let mut s = Self {
            coeffs: BTreeMap::new(),
            q_offset,
            zeta_offset,
            q_unit,
            cutoff,
        };
        for (a, b, c) in terms {
            s.add_term(a, b, c);
        }
        s.prune();
        s
    }

    pub fn q_offset(&self) -> Rational64 {
        self.q_offset
    }

    pub fn zeta_offset(&self) -> Rational64 {
        self.zeta_offset
    }

    pub fn cutoff(&self) -> Rational64 {
        self.cutoff
    }

    pub fn q_unit(&self) -> i64 {
        self.q_unit
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn add_term(&mut self, a: i64, b: i64, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry((a, b)).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&(a, b));
        }
    }

    fn abs_q(&self, a: i64) -> Rational64 {
        self.q_offset + Rational64::new(a, self.q_unit)
    }

    fn prune(&mut self) {
        let (off, unit, cut) = (self.q_offset, self.q_unit, self.cutoff);
        self.coeffs
            .retain(|&(a, _), c| !c.is_zero() && off + Rational64::new(a, unit) < cut);
    }

    /// Smallest absolute q-exponent carrying a nonzero coefficient.
    pub fn valuation(&self) -> Option<Rational64> {
        self.coeffs.keys().map(|&(a, _)| a).min().map(|a| self.abs_q(a))
    }

    /// Iterate (absolute q-exponent, absolute ζ-exponent, coefficient).
    pub fn terms(&self) -> impl Iterator<Item = (Rational64, Rational64, &BigRational)> + '_ {
        self.coeffs
            .iter()
            .map(move |(&(a, b), c)| (self.abs_q(a), self.zeta_offset + Rational64::from_integer(b), c))
    }

    /// Coefficient of q^{qe} ζ^{ze} (zero if absent).
    pub fn coefficient(&self, qe: Rational64, ze: Rational64) -> Result<BigRational> {
        if qe >= self.cutoff {
            return Err(Error::InvalidArgument(format!(
                "q-exponent {qe} is beyond the known precision {}",
                self.cutoff
            )));
        }
        let a = (qe - self.q_offset) * self.q_unit;
        let b = ze - self.zeta_offset;
        if !a.is_integer() || !b.is_integer() {
            return Ok(BigRational::zero());
        }
        Ok(self
            .coeffs
            .get(&(a.to_integer(), b.to_integer()))
            .cloned()
            .unwrap_or_else(BigRational::zero))
    }

    /// Re-express on a finer q-grid.
    fn regrid(&self, unit: i64) -> Self {
        assert_eq!(unit % self.q_unit, 0);
        let f = unit / self.q_unit;
        Self {
            coeffs: self.coeffs.iter().map(|(&(a, b), c)| ((a * f, b), c.clone())).collect(),
            q_offset: self.q_offset,
            zeta_offset: self.zeta_offset,
            q_unit: unit,
            cutoff: self.cutoff,
        }
    }

    /// Fold the integral parts of both offsets into the stored exponents so
    /// that the remaining offsets lie in [0, 1/q_unit) and [0, 1).
    pub fn normalized(&self) -> Self {
        let qa = self.q_offset * self.q_unit;
        let q_shift = qa.floor().to_integer();
        let z_shift = self.zeta_offset.floor().to_integer();
        Self {
            coeffs: self
                .coeffs
                .iter()
                .map(|(&(a, b), c)| ((a + q_shift, b + z_shift), c.clone()))
                .collect(),
            q_offset: self.q_offset - Rational64::new(q_shift, self.q_unit),
            zeta_offset: self.zeta_offset - Rational64::from_integer(z_shift),
            q_unit: self.q_unit,
            cutoff: self.cutoff,
        }
    }

    pub fn has_integral_exponents(&self) -> bool {
        self.terms().all(|(q, z, _)| q.is_integer() && z.is_integer())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let unit = self.q_unit.lcm(&other.q_unit);
        let (x, y) = (self.regrid(unit), other.regrid(unit));
        let cutoff = match (x.valuation(), y.valuation()) {
            (Some(vx), Some(vy)) => (x.cutoff + vy).min(y.cutoff + vx),
            _ => x.cutoff.min(y.cutoff),
        };
        let q_offset = x.q_offset + y.q_offset;
        let zeta_offset = x.zeta_offset + y.zeta_offset;
        let limit = (cutoff - q_offset) * unit; // a must satisfy a < limit
        let mut out = Self {
            coeffs: BTreeMap::new(),
            q_offset,
            zeta_offset,
            q_unit: unit,
            cutoff,
        };
        for (&(a1, b1), c1) in &x.coeffs {
            for (&(a2, b2), c2) in &y.coeffs {
                if Rational64::from_integer(a1 + a2) >= limit {
                    // y is ordered by a within b only, so keep scanning.
                    continue;
                }
                out.add_term(a1 + a2, b1 + b2, c1 * c2);
            }
        }
        out.prune();
        out
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = self.clone();
        if c.is_zero() {
            out.coeffs.clear();
        } else {
            for v in out.coeffs.values_mut() {
                *v *= c;
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-BigRational::one())
    }

    /// Sum of two series; offsets must agree modulo the common grid.
    pub fn add(&self, other: &Self) -> Result<Self> {
        let unit = self.q_unit.lcm(&other.q_unit);
        let (x, y) = (self.regrid(unit).normalized(), other.regrid(unit).normalized());
        if x.q_offset != y.q_offset || x.zeta_offset != y.zeta_offset {
            return Err(Error::InvalidArgument(format!(
                "incompatible offsets: q^{} ζ^{} vs q^{} ζ^{}",
                x.q_offset, x.zeta_offset, y.q_offset, y.zeta_offset
            )));
        }
        let mut out = x.clone();
        out.cutoff = x.cutoff.min(y.cutoff);
        for (&(a, b), c) in &y.coeffs {
            out.add_term(a, b, c.clone());
        }
        out.prune();
        Ok(out)
    }

    /// Lower the known precision.
    pub fn truncate(&self, cutoff: Rational64) -> Self {
        let mut out = self.clone();
        out.cutoff = out.cutoff.min(cutoff);
        out.prune();
        out
    }

    /// Substitute ζ = 1.
    pub fn at_zeta_one(&self) -> Self {
        let mut out = Self {
            coeffs: BTreeMap::new(),
            q_offset: self.q_offset,
            zeta_offset: Rational64::zero(),
            q_unit: self.q_unit,
            cutoff: self.cutoff,
        };
        for (&(a, _), c) in &self.coeffs {
            out.add_term(a, 0, c.clone());
        }
        out
    }

    pub fn is_zeta_free(&self) -> bool {
        self.zeta_offset.is_zero() && self.coeffs.keys().all(|&(_, b)| b == 0)
    }

    /// Multiplicative inverse of a ζ-free series with a nonzero leading term.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_zeta_free() {
            return Err(Error::Unsupported("inverse of a ζ-dependent series".into()));
        }
        let Some(&(a0, _)) = self.coeffs.keys().min() else {
            return Err(Error::InvalidArgument("inverse of the zero series".into()));
        };
        let v = self.abs_q(a0);
        // g = f / q^v is a power series in x = q^{1/unit} with g(0) ≠ 0.
        let len_r = (self.cutoff - v) * self.q_unit;
        let len = len_r.ceil().to_integer().max(0) as usize;
        let mut g = vec![BigRational::zero(); len];
        for (&(a, _), c) in &self.coeffs {
            let i = (a - a0) as usize;
            if i < len {
                g[i] = c.clone();
            }
        }
        let g0_inv = g[0].recip();
        let mut h = vec![BigRational::zero(); len];
        if len > 0 {
            h[0] = g0_inv.clone();
        }
        for i in 1..len {
            let mut acc = BigRational::zero();
            for j in 1..=i {
                if !g[j].is_zero() && !h[i - j].is_zero() {
                    acc += &g[j] * &h[i - j];
                }
            }
            h[i] = -acc * &g0_inv;
        }
        let unit = self.q_unit;
        Ok(Self::from_terms(
            h.into_iter().enumerate().map(|(i, c)| (i as i64, 0, c)),
            -v,
            Rational64::zero(),
            unit,
            self.cutoff - v - v,
        ))
    }

    pub fn div(&self, denom: &Self) -> Result<Self> {
        Ok(self.mul(&denom.inverse()?))
    }

    /// All coefficients are integers.
    pub fn is_integral(&self) -> bool {
        self.coeffs.values().all(|c| c.is_integer())
    }

    /// Largest coefficient magnitude (diagnostic).
    pub fn max_abs(&self) -> BigInt {
        self.coeffs
            .values()
            .map(|c| c.abs().to_integer())
            .max()
            .unwrap_or_default()
    }
}

pub(crate) fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}
