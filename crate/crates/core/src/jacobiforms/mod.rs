//! Exact Fourier expansions of the index-1 weak Jacobi forms φ₋₂,₁, φ₀,₁ and
//! the cusp forms φ₁₀,₁ = Δ·φ₋₂,₁, φ₁₂,₁ = Δ·φ₀,₁.

mod series;
mod theta;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::Zero;

use crate::error::{Error, Result};

pub use series::LaurentSeries;
pub use theta::{eta_power, theta1_squared, theta2, theta3, theta4};

pub const DEFAULT_CUTOFF: i64 = 60;

/// Extra q-precision carried through quotients before the final truncation.
const GUARD: i64 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeakKind {
    MinusTwo,
    Zero,
}

impl WeakKind {
    pub fn from_weight(k: i64) -> Result<Self> {
        match k {
            -2 => Ok(Self::MinusTwo),
            0 => Ok(Self::Zero),
            _ => Err(Error::InvalidArgument(format!(
                "no weak index-1 generator of weight {k}"
            ))),
        }
    }

    pub fn weight(self) -> i64 {
        match self {
            Self::MinusTwo => -2,
            Self::Zero => 0,
        }
    }
}

/// Integer Fourier coefficients c(n, r) of an index-m Jacobi form for n ≤ max_n.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierTable {
    m: i64,
    weight: i64,
    max_n: i64,
    cusp: bool,
    c: BTreeMap<(i64, i64), BigInt>,
}

impl FourierTable {
    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn weight(&self) -> i64 {
        self.weight
    }

    pub fn max_n(&self) -> i64 {
        self.max_n
    }

    pub fn is_cusp(&self) -> bool {
        self.cusp
    }

    /// Whether (n, r) lies in the support allowed by the table's kind.
    pub fn in_support(&self, n: i64, r: i64) -> bool {
        let disc = 4 * self.m * n - r * r;
        if self.cusp {
            disc > 0
        } else {
            disc + self.m * self.m >= 0
        }
    }

    /// Stored nonzero coefficients, ordered by (n, r).
    pub fn entries(&self) -> impl Iterator<Item = (i64, i64, &BigInt)> {
        self.c.iter().map(|(&(n, r), c)| (n, r, c))
    }

    /// Every (n, r) in the support with n ≤ max_n, including zero coefficients.
    pub fn support(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        (0..=self.max_n).flat_map(move |n| {
            let bound = ((4 * self.m * n + self.m * self.m) as f64).sqrt() as i64 + 1;
            (-bound..=bound)
                .filter(move |&r| self.in_support(n, r))
                .map(move |r| (n, r))
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,r,c\n");
        for (n, r) in self.support() {
            let _ = writeln!(out, "{n},{r},{}", self.get(n, r));
        }
        out
    }

    fn get(&self, n: i64, r: i64) -> BigInt {
        self.c.get(&(n, r.abs())).cloned().unwrap_or_default()
    }
}

/// c(n, r) with the r → −r reduction; zero outside the support.
pub fn coeff(table: &FourierTable, n: i64, r: i64) -> Result<BigInt> {
    if n > table.max_n {
        return Err(Error::CutoffExceeded {
            requested: n,
            max: table.max_n,
        });
    }
    if n < 0 || !table.in_support(n, r) {
        return Ok(BigInt::zero());
    }
    Ok(table.get(n, r))
}

/// Coefficient by index-1 discriminant 4n − r², via the representative with
/// r ∈ {0, 1}.
pub fn coeff_by_discriminant(table: &FourierTable, disc: i64) -> Result<BigInt> {
    if table.m != 1 {
        return Err(Error::Unsupported("discriminant lookup needs index 1".into()));
    }
    let r = disc.rem_euclid(4).min(1);
    if (disc + r * r) % 4 != 0 {
        return Ok(BigInt::zero());
    }
    coeff(table, (disc + r * r) / 4, r)
}

fn check_cutoff(cutoff: i64) -> Result<()> {
    if cutoff < 1 {
        return Err(Error::InvalidArgument(format!("cutoff {cutoff} < 1")));
    }
    Ok(())
}

fn weak_series(kind: WeakKind, cutoff: i64) -> Result<LaurentSeries> {
    let work = cutoff + GUARD;
    let s = match kind {
        WeakKind::MinusTwo => theta1_squared(work).neg().div(&eta_power(6, work)?)?,
        WeakKind::Zero => {
            let mut total: Option<LaurentSeries> = None;
            for theta in [theta2(work), theta3(work), theta4(work)] {
                let sq = theta.square();
                let term = sq.div(&sq.at_zeta_one())?;
                total = Some(match total {
                    None => term,
                    Some(acc) => acc.add(&term)?,
                });
            }
            total.expect("three summands").scale(&series::rat(4))
        }
    };
    Ok(s)
}

fn into_table(s: &LaurentSeries, weight: i64, cutoff: i64, cusp: bool) -> Result<FourierTable> {
    let limit = Rational64::from_integer(cutoff + 1);
    if s.cutoff() < limit {
        return Err(Error::Data(format!("series precision {} short of {limit}", s.cutoff())));
    }
    let s = s.truncate(limit).normalized();
    if !s.has_integral_exponents() {
        return Err(Error::Data("non-integral exponents in final assembly".into()));
    }
    if !s.is_integral() {
        return Err(Error::Data("non-integral coefficient in final assembly".into()));
    }
    let mut table = FourierTable {
        m: 1,
        weight,
        max_n: cutoff,
        cusp,
        c: BTreeMap::new(),
    };
    for (qe, ze, c) in s.terms() {
        let (n, r) = (qe.to_integer(), ze.to_integer());
        if !table.in_support(n, r) {
            return Err(Error::Data(format!(
                "coefficient {c} at (n, r) = ({n}, {r}) outside the support"
            )));
        }
        if r >= 0 {
            table.c.insert((n, r), c.to_integer());
        } else if s.coefficient(qe, -ze)? != *c {
            return Err(Error::Data(format!("r → −r symmetry fails at ({n}, {r})")));
        }
    }
    Ok(table)
}

/// φ₋₂,₁ or φ₀,₁ through q^cutoff.
pub fn phi_weak(kind: WeakKind, cutoff: i64) -> Result<FourierTable> {
    check_cutoff(cutoff)?;
    into_table(&weak_series(kind, cutoff)?, kind.weight(), cutoff, false)
}

/// φ₁₀,₁ = Δ·φ₋₂,₁ or φ₁₂,₁ = Δ·φ₀,₁ through q^cutoff.
pub fn phi_cusp(k: i64, cutoff: i64) -> Result<FourierTable> {
    check_cutoff(cutoff)?;
    let kind = match k {
        10 => WeakKind::MinusTwo,
        12 => WeakKind::Zero,
        _ => {
            return Err(Error::InvalidArgument(format!(
                "no index-1 cusp form generator of weight {k}"
            )))
        }
    };
    let s = weak_series(kind, cutoff)?.mul(&eta_power(24, cutoff + GUARD)?);
    into_table(&s, k, cutoff, true)
}

/// Σ_r c(n, r) for each n, i.e. the table's specialization at ζ = 1.
pub fn zeta_one_columns(table: &FourierTable) -> Vec<BigInt> {
    let mut cols = vec![BigInt::zero(); table.max_n as usize + 1];
    for (n, r) in table.support() {
        cols[n as usize] += table.get(n, r);
    }
    cols
}

/// ζ = 1 specialization computed on the series itself, before tabulation.
pub fn zeta_one_direct(kind: WeakKind, cutoff: i64) -> Result<Vec<BigRational>> {
    check_cutoff(cutoff)?;
    let s = weak_series(kind, cutoff)?
        .truncate(Rational64::from_integer(cutoff + 1))
        .at_zeta_one();
    (0..=cutoff)
        .map(|n| s.coefficient(Rational64::from_integer(n), Rational64::zero()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(t: &FourierTable, n: i64, r: i64) -> i64 {
        i64::try_from(coeff(t, n, r).unwrap()).unwrap()
    }

    #[test]
    fn weak_generators_normalized() {
        let a = phi_weak(WeakKind::MinusTwo, 8).unwrap();
        assert_eq!((c(&a, 0, 0), c(&a, 0, 1), c(&a, 0, -1)), (-2, 1, 1));
        let b = phi_weak(WeakKind::Zero, 8).unwrap();
        assert_eq!((c(&b, 0, 0), c(&b, 0, 1), c(&b, 0, -1)), (10, 1, 1));
        assert_eq!((c(&a, 1, 0), c(&a, 1, 1), c(&a, 1, 2)), (-12, 8, -2));
        assert_eq!(c(&b, 1, 0), 108);
        assert_eq!(c(&b, 1, 1), -64);
        assert_eq!(c(&b, 1, 2), 10);
    }

    #[test]
    fn cusp_forms_leading_coefficients() {
        let t10 = phi_cusp(10, 10).unwrap();
        assert_eq!((c(&t10, 1, 1), c(&t10, 1, 0), c(&t10, 1, -1)), (1, -2, 1));
        let t12 = phi_cusp(12, 10).unwrap();
        assert_eq!((c(&t12, 1, 1), c(&t12, 1, 0)), (1, 10));
        assert_eq!(c(&t10, 3, 4), 0);
        assert!(matches!(coeff(&t10, 11, 0), Err(Error::CutoffExceeded { .. })));
    }

    #[test]
    fn index_one_discriminant_dependence() {
        for t in [
            phi_cusp(10, 20).unwrap(),
            phi_cusp(12, 20).unwrap(),
            phi_weak(WeakKind::Zero, 20).unwrap(),
        ] {
            let mut by_disc: BTreeMap<i64, BigInt> = BTreeMap::new();
            for (n, r) in t.support() {
                let v = coeff(&t, n, r).unwrap();
                let prev = by_disc.entry(4 * n - r * r).or_insert_with(|| v.clone());
                assert_eq!(*prev, v, "disc {}", 4 * n - r * r);
                if n + r < t.max_n() {
                    assert_eq!(coeff(&t, n + r + 1, r + 2).unwrap(), v);
                }
                assert_eq!(coeff_by_discriminant(&t, 4 * n - r * r).unwrap(), v);
            }
        }
    }

    #[test]
    fn zeta_one_specializations() {
        let a = phi_weak(WeakKind::MinusTwo, 12).unwrap();
        let b = phi_weak(WeakKind::Zero, 12).unwrap();
        let ca = zeta_one_columns(&a);
        let cb = zeta_one_columns(&b);
        let da = zeta_one_direct(WeakKind::MinusTwo, 12).unwrap();
        let db = zeta_one_direct(WeakKind::Zero, 12).unwrap();
        for n in 0..=12 {
            assert!(ca[n].is_zero());
            assert_eq!(cb[n], BigInt::from(if n == 0 { 12 } else { 0 }));
            assert_eq!(BigRational::from_integer(ca[n].clone()), da[n]);
            assert_eq!(BigRational::from_integer(cb[n].clone()), db[n]);
        }
    }

    #[test]
    fn csv_export_shape() {
        let t = phi_cusp(10, 3).unwrap();
        let csv = t.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("n,r,c"));
        assert!(csv.contains("\n1,1,1\n"));
        assert!(csv.contains("\n1,0,-2\n"));
    }
}
