//! The c-series side of the Petersson formula for index-m Jacobi forms, with
//! a rigorous bound on the truncated tail.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bessel::{bessel_unchecked, gamma_half, gamma_nu_plus_one, HalfOrder};
use crate::error::{Error, Result};
use crate::hsums::{bad_split, h_fast_split, FastConfig, IndexData, RawArgs, Sign};
use crate::jacobiforms::{coeff, FourierTable};
use crate::modarith::gcd;
use crate::sum::{e_frac, Accumulator, UnitRootSum};
use crate::tolerances::RATIO_BASE_TOLERANCE;

/// Moduli handled per parallel work unit. Fixed so that the reduction order,
/// and hence every output bit, is independent of the thread count.
pub const CHUNK: u64 = 2048;

/// Relative accuracy budget charged to each Bessel evaluation.
pub const BESSEL_REL_ERR: f64 = 1e-13;

const BUILTIN_DIMENSIONS: &str = include_str!("../data/dimensions.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeterssonJob {
    pub k: i64,
    pub index: IndexData,
    pub level: u64,
    pub c_max: u64,
}

impl PeterssonJob {
    pub fn new(k: i64, index: IndexData, level: u64, c_max: u64) -> Result<Self> {
        HalfOrder::from_weight(k)?;
        if level == 0 {
            return Err(Error::InvalidArgument("level N must be positive".into()));
        }
        Ok(Self { k, index, level, c_max })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncatedSide {
    pub value: UnitRootSum,
    pub tail: f64,
    /// Number of moduli c actually summed.
    pub terms: u64,
}

impl TruncatedSide {
    /// Imaginary part is within the combined error budget.
    pub fn is_real_within_bounds(&self) -> bool {
        self.value.value.im.abs() <= self.tail + self.value.err
    }
}

/// λ_{k,m}(D) = Γ(k − 3/2) / (4π^{k−3/2}) · m^{k−2} · |D|^{3/2−k}.
pub fn lambda_km(k: i64, m: i64, d: i64) -> Result<f64> {
    let order = HalfOrder::from_weight(k)?;
    if m < 1 || d >= 0 {
        return Err(Error::InvalidArgument(format!(
            "need m ≥ 1 and D < 0, got m = {m}, D = {d}"
        )));
    }
    let nu = order.nu();
    let gamma = gamma_half((k - 2) as u32);
    let abs_d = d.unsigned_abs() as f64;
    Ok(gamma / (4.0 * PI.powf(nu)) * (m as f64).powi((k - 2) as i32) * abs_d.powf(-nu))
}

/// Constant A with |Σ_± term(c)| ≤ A·c^{−ν} for every c ≥ 1, including the
/// prefactor π/√(2m).
pub fn tail_constant(k: i64, index: &IndexData) -> Result<f64> {
    let order = HalfOrder::from_weight(k)?;
    let m = index.m as f64;
    let abs_d = index.abs_d() as f64;
    let x = PI * abs_d / (2.0 * m);
    Ok(PI / (2.0 * m).sqrt() * 4.0 * abs_d.sqrt() * x.powf(order.nu()) / gamma_nu_plus_one(order))
}

/// Rigorous bound on Σ_{c > c_max} of the series terms (all c, so also valid
/// for any level).
pub fn tail_bound(k: i64, index: &IndexData, c_max: u64) -> Result<f64> {
    let a = tail_constant(k, index)?;
    let nu = HalfOrder::from_weight(k)?.nu();
    Ok(if c_max == 0 {
        // c = 1 term plus ∫_1^∞ c^{−ν} dc
        a * (1.0 + 1.0 / (nu - 1.0))
    } else {
        a * (c_max as f64).powf(1.0 - nu) / (nu - 1.0)
    })
}

/// Σ_± c^{−3/2}·H^±_{m,c}(n,r)·e(±r²/(2mc))·J_ν(π|D|/(mc)), without the
/// outer i^k π/√(2m) factor.
pub fn series_term(k: i64, index: &IndexData, c: u64) -> Result<UnitRootSum> {
    if c == 0 {
        return Err(Error::InvalidArgument("modulus c must be positive".into()));
    }
    Ok(term_unchecked(
        HalfOrder::from_weight(k)?,
        index,
        c,
        &FastConfig::default(),
    ))
}

fn term_unchecked(order: HalfOrder, ix: &IndexData, c: u64, cfg: &FastConfig) -> UnitRootSum {
    let args = RawArgs::from(ix);
    let (q, t) = bad_split(c, ix.m, ix.d);
    let x = PI * ix.abs_d() as f64 / (ix.m as f64 * c as f64);
    let weight = bessel_unchecked(order, x) / (c as f64).powf(1.5);
    let r2 = ix.r as i128 * ix.r as i128;
    let den = 2 * ix.m as u64 * c;
    let mut out = UnitRootSum::zero();
    for sign in Sign::BOTH {
        let h = h_fast_split(args, q, t, sign, cfg);
        let phase = e_frac(sign.as_i64() as i128 * r2, den);
        let v = h.value * phase * weight;
        let err = h.err * weight.abs() + (h.abs() + h.err) * weight.abs() * BESSEL_REL_ERR;
        out = out + UnitRootSum::new(v, err);
    }
    out
}

fn i_pow(k: i64) -> Complex64 {
    match k.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Σ weight(c)·term(c) over multiples c of `level` with lo < c ≤ hi, in
/// fixed chunks reduced in ascending order. Terms with zero weight are skipped.
pub(crate) fn ordered_series<W>(
    order: HalfOrder,
    ix: &IndexData,
    level: u64,
    lo: u64,
    hi: u64,
    weight: W,
) -> (UnitRootSum, u64)
where
    W: Fn(u64) -> f64 + Sync,
{
    let cfg = FastConfig::default();
    let first = lo / level + 1;
    let last = hi / level;
    if last < first {
        return (UnitRootSum::zero(), 0);
    }
    let count = last - first + 1;
    let chunks = count.div_ceil(CHUNK);
    let partials: Vec<Accumulator> = (0..chunks)
        .into_par_iter()
        .map(|j| {
            let mut acc = Accumulator::new();
            let a = first + j * CHUNK;
            let b = (a + CHUNK - 1).min(last);
            for i in a..=b {
                let c = i * level;
                let w = weight(c);
                if w != 0.0 {
                    let t = term_unchecked(order, ix, c, &cfg);
                    acc.add_sum(UnitRootSum::new(t.value * w, t.err * w.abs()));
                }
            }
            acc
        })
        .collect();
    let mut total = Accumulator::new();
    for p in &partials {
        total.absorb(p);
    }
    (total.finish(), count)
}

/// 1 + (i^k π/√(2m)) Σ_± Σ_{c ≤ C_max, N | c} (...), with the tail bound.
pub fn geometric_side(job: &PeterssonJob) -> Result<TruncatedSide> {
    let order = HalfOrder::from_weight(job.k)?;
    if job.level == 0 {
        return Err(Error::InvalidArgument("level N must be positive".into()));
    }
    let ix = job.index;
    let (series, terms) = ordered_series(order, &ix, job.level, 0, job.c_max, |_| 1.0);
    let prefactor = i_pow(job.k) * (PI / (2.0 * ix.m as f64).sqrt());
    let value = UnitRootSum::one() + series.scale(prefactor);
    Ok(TruncatedSide {
        value,
        tail: tail_bound(job.k, &ix, job.c_max)?,
        terms,
    })
}

/// Externally sourced dimensions of J^cusp_{k,m}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimensionFacts {
    dims: BTreeMap<(i64, i64), u32>,
}

impl DimensionFacts {
    pub fn builtin() -> Self {
        Self::parse(BUILTIN_DIMENSIONS).expect("bundled dimension table parses")
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Data(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Lines "k,m,dim"; '#' starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut dims = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() || line.replace(' ', "") == "k,m,dim" {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            let bad = || Error::Data(format!("line {}: expected k,m,dim, got {raw:?}", lineno + 1));
            if fields.len() != 3 {
                return Err(bad());
            }
            let k: i64 = fields[0].parse().map_err(|_| bad())?;
            let m: i64 = fields[1].parse().map_err(|_| bad())?;
            let dim: u32 = fields[2].parse().map_err(|_| bad())?;
            dims.insert((k, m), dim);
        }
        Ok(Self { dims })
    }

    pub fn dim(&self, k: i64, m: i64) -> Option<u32> {
        self.dims.get(&(k, m)).copied()
    }

    fn require(&self, k: i64, m: i64, want: u32) -> Result<()> {
        match self.dim(k, m) {
            Some(d) if d == want => Ok(()),
            Some(d) => Err(Error::PreconditionViolated(format!(
                "dim J^cusp_{{{k},{m}}} = {d}, need {want}"
            ))),
            None => Err(Error::PreconditionViolated(format!(
                "no dimension recorded for (k, m) = ({k}, {m})"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroDimSample {
    pub n: i64,
    pub r: i64,
    pub d: i64,
    pub value: UnitRootSum,
    pub tail: f64,
    pub tolerance: f64,
    /// tail + tolerance − |value|; nonnegative on success.
    pub margin: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroDimReport {
    pub k: i64,
    pub m: i64,
    pub c_max: u64,
    pub samples: Vec<ZeroDimSample>,
    pub pass: bool,
}

/// Checks that the geometric side vanishes up to tail + tolerance on a space
/// recorded as zero-dimensional.
pub fn zero_dim_check(
    facts: &DimensionFacts,
    k: i64,
    samples: &[(i64, i64)],
    c_max: u64,
    tolerance: f64,
) -> Result<ZeroDimReport> {
    let m = 1;
    facts.require(k, m, 0)?;
    let mut out = Vec::with_capacity(samples.len());
    for &(n, r) in samples {
        let ix = IndexData::new(m, n, r)?;
        let side = geometric_side(&PeterssonJob::new(k, ix, 1, c_max)?)?;
        let margin = side.tail + tolerance - side.value.abs();
        out.push(ZeroDimSample {
            n,
            r,
            d: ix.d,
            value: side.value,
            tail: side.tail,
            tolerance,
            margin,
            pass: margin >= 0.0,
        });
    }
    let pass = out.iter().all(|s| s.pass);
    Ok(ZeroDimReport {
        k,
        m,
        c_max,
        samples: out,
        pass,
    })
}

/// Two (n, r) positions whose coefficient ratio is compared.
pub type CoefficientPair = ((i64, i64), (i64, i64));

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioPair {
    pub first: (i64, i64),
    pub second: (i64, i64),
    pub rhs: (f64, f64),
    pub lambda: (f64, f64),
    pub tail: (f64, f64),
    /// [RHS₁/λ₁] / [RHS₂/λ₂]
    pub observed: Option<f64>,
    /// |c₁|²/|c₂|² as an exact fraction.
    pub expected: Option<String>,
    pub rel_err: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    pub k: i64,
    pub m: i64,
    pub c_max: u64,
    pub pairs: Vec<RatioPair>,
    /// Pairs actually compared (skipped pairs excluded).
    pub compared: usize,
    pub pass: bool,
}

/// Compares normalized geometric sides with squared coefficient ratios on a
/// one-dimensional space.
pub fn ratio_check(
    facts: &DimensionFacts,
    table: &FourierTable,
    pairs: &[CoefficientPair],
    c_max: u64,
) -> Result<RatioReport> {
    let (k, m) = (table.weight(), table.m());
    facts.require(k, m, 1)?;
    let mut cache: BTreeMap<(i64, i64), (f64, f64, f64)> = BTreeMap::new();
    let mut side = |n: i64, r: i64| -> Result<(f64, f64, f64)> {
        if let Some(v) = cache.get(&(n, r)) {
            return Ok(*v);
        }
        let ix = IndexData::new(m, n, r)?;
        let s = geometric_side(&PeterssonJob::new(k, ix, 1, c_max)?)?;
        let v = (s.value.value.re, s.tail + s.value.err, lambda_km(k, m, ix.d)?);
        cache.insert((n, r), v);
        Ok(v)
    };
    let mut out = Vec::with_capacity(pairs.len());
    for &((n1, r1), (n2, r2)) in pairs {
        let c1 = coeff(table, n1, r1)?;
        let c2 = coeff(table, n2, r2)?;
        let (rhs1, tail1, lam1) = side(n1, r1)?;
        let (rhs2, tail2, lam2) = side(n2, r2)?;
        let tolerance = RATIO_BASE_TOLERANCE.max(tail1 / rhs1.abs() + tail2 / rhs2.abs());
        let mut pair = RatioPair {
            first: (n1, r1),
            second: (n2, r2),
            rhs: (rhs1, rhs2),
            lambda: (lam1, lam2),
            tail: (tail1, tail2),
            observed: None,
            expected: None,
            rel_err: None,
            tolerance,
            pass: true,
            note: None,
        };
        if c2.is_zero() {
            pair.note = Some(format!("c({n2}, {r2}) = 0; pair skipped"));
            out.push(pair);
            continue;
        }
        let expected = BigRational::new(&c1 * &c1, &c2 * &c2);
        let expected_f = ratio_to_f64(&expected);
        let observed = (rhs1 / lam1) / (rhs2 / lam2);
        let rel_err = (observed / expected_f - 1.0).abs();
        pair.observed = Some(observed);
        pair.expected = Some(expected.to_string());
        pair.rel_err = Some(rel_err);
        pair.pass = rel_err <= tolerance;
        out.push(pair);
    }
    let compared = out.iter().filter(|p| p.observed.is_some()).count();
    let pass = compared > 0 && out.iter().all(|p| p.pass);
    Ok(RatioReport {
        k,
        m,
        c_max,
        pairs: out,
        compared,
        pass,
    })
}

fn ratio_to_f64(q: &BigRational) -> f64 {
    let num = q.numer().to_f64().unwrap_or(f64::INFINITY);
    let den = q.denom().to_f64().unwrap_or(f64::INFINITY);
    if num.is_finite() && den.is_finite() {
        num / den
    } else {
        // scale down both by a common power of two
        let shift = q.numer().bits().max(q.denom().bits()).saturating_sub(1000);
        let n: BigInt = q.numer().abs() >> shift;
        let d: BigInt = q.denom() >> shift;
        n.to_f64().unwrap_or(0.0) / d.to_f64().unwrap_or(1.0)
    }
}

/// (c, m, r)·(c, D') factor appearing in the general Weil bound, exposed for
/// reporting tails on non-fundamental discriminants.
pub fn weil_gcd_factor(index: &IndexData, c: u64) -> u64 {
    let g = gcd(gcd(c as i128, index.m as i128) as i128, index.r as i128);
    let dprime = index.d / gcd(index.m as i128, index.r as i128) as i64;
    g * gcd(c as i128, dprime as i128)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modarith::tau;

    #[test]
    fn lambda_plug_in_and_scalings() {
        let l = lambda_km(4, 1, -3).unwrap();
        let expect = (3.0 * PI.sqrt() / 4.0) / (4.0 * PI.powf(2.5)) * 3f64.powf(-2.5);
        assert!((l / expect - 1.0).abs() < 1e-14);
        for k in [4, 6, 10, 12] {
            let r = lambda_km(k, 3, -11).unwrap() / lambda_km(k, 6, -11).unwrap();
            assert!((r / 2f64.powi((2 - k) as i32) - 1.0).abs() < 1e-13);
            let s = lambda_km(k, 3, -44).unwrap() / lambda_km(k, 3, -11).unwrap();
            assert!((s / 4f64.powf(1.5 - k as f64) - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn empty_truncation() {
        let ix = IndexData::new(1, 1, 1).unwrap();
        let side = geometric_side(&PeterssonJob::new(4, ix, 1, 0).unwrap()).unwrap();
        assert_eq!(side.value.value, Complex64::new(1.0, 0.0));
        assert_eq!(side.terms, 0);
        assert!(side.tail > 0.0 && side.tail.is_finite());
        let side = geometric_side(&PeterssonJob::new(4, ix, 7, 6).unwrap()).unwrap();
        assert_eq!(side.value.value, Complex64::new(1.0, 0.0));
    }

    #[test]
    fn terms_respect_tail_constant() {
        for (k, (n, r)) in [(4, (1, 1)), (6, (2, 1)), (10, (3, 0)), (4, (4, 0))] {
            let ix = IndexData::new(1, n, r).unwrap();
            let a = tail_constant(k, &ix).unwrap();
            let nu = k as f64 - 1.5;
            let pre = PI / 2f64.sqrt();
            for c in 1..400u64 {
                let t = series_term(k, &ix, c).unwrap();
                assert!(pre * t.abs() <= a * (c as f64).powf(-nu) * (1.0 + 1e-12), "k={k} c={c}");
                assert!(
                    tau(c) as f64 * (weil_gcd_factor(&ix, c) as f64).sqrt()
                        <= 2.0 * (c as f64).sqrt() * (ix.abs_d() as f64).sqrt()
                );
            }
        }
    }

    #[test]
    fn tail_decreases() {
        let ix = IndexData::new(1, 2, 1).unwrap();
        let mut prev = tail_bound(6, &ix, 0).unwrap();
        for c in [1u64, 10, 100, 1000, 10000] {
            let t = tail_bound(6, &ix, c).unwrap();
            assert!(t < prev);
            prev = t;
        }
    }

    #[test]
    fn dimension_facts_parse() {
        let f = DimensionFacts::builtin();
        assert_eq!(f.dim(4, 1), Some(0));
        assert_eq!(f.dim(10, 1), Some(1));
        assert_eq!(f.dim(14, 1), None);
        assert!(DimensionFacts::parse("4,1").is_err());
        assert!(DimensionFacts::parse("# only a comment\n\n")
            .unwrap()
            .dim(4, 1)
            .is_none());
    }

    #[test]
    fn vanishing_at_moderate_cutoff() {
        let facts = DimensionFacts::builtin();
        let rep = zero_dim_check(&facts, 8, &[(1, 1), (2, 1)], 2000, 1e-3).unwrap();
        assert!(rep.pass, "{rep:?}");
        for s in &rep.samples {
            assert!(s.value.abs() < 1e-6);
        }
        assert!(zero_dim_check(&facts, 10, &[(1, 1)], 10, 1e-3).is_err());
    }
}
