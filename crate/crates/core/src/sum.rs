//! Exact-argument unit roots and compensated complex accumulation.
//!
//! Every floating exponential sum in the crate goes through [`Accumulator`],
//! which keeps a Neumaier-compensated running sum together with the bookkeeping
//! needed for the error bound carried by [`UnitRootSum`].

use std::f64::consts::TAU;
use std::ops::{Add, Mul};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A complex value paired with an absolute error bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitRootSum {
    pub value: Complex64,
    pub err: f64,
}

impl UnitRootSum {
    pub fn exact(value: Complex64) -> Self {
        Self { value, err: 0.0 }
    }

    pub fn new(value: Complex64, err: f64) -> Self {
        debug_assert!(err >= 0.0);
        Self { value, err }
    }

    pub fn zero() -> Self {
        Self::exact(Complex64::new(0.0, 0.0))
    }

    pub fn one() -> Self {
        Self::exact(Complex64::new(1.0, 0.0))
    }

    pub fn abs(&self) -> f64 {
        self.value.norm()
    }

    /// Multiply by an exactly known scalar factor.
    pub fn scale(self, factor: Complex64) -> Self {
        let f = factor.norm();
        Self::new(
            self.value * factor,
            self.err * f + self.value.norm() * f * f64::EPSILON * 4.0,
        )
    }

    /// True if `self` and `other` agree within the combined error plus `slack`.
    pub fn agrees_with(&self, other: &UnitRootSum, slack: f64) -> bool {
        (self.value - other.value).norm() <= self.err + other.err + slack
    }
}

impl Mul for UnitRootSum {
    type Output = UnitRootSum;

    fn mul(self, rhs: UnitRootSum) -> UnitRootSum {
        let value = self.value * rhs.value;
        let err = self.value.norm() * rhs.err
            + rhs.value.norm() * self.err
            + self.err * rhs.err
            + value.norm() * f64::EPSILON * 4.0;
        UnitRootSum::new(value, err)
    }
}

impl Add for UnitRootSum {
    type Output = UnitRootSum;

    fn add(self, rhs: UnitRootSum) -> UnitRootSum {
        let value = self.value + rhs.value;
        let err = self.err + rhs.err + value.norm() * f64::EPSILON * 2.0;
        UnitRootSum::new(value, err)
    }
}

/// e(num / den) = exp(2πi·num/den), with the argument reduced mod 1 in
/// integer arithmetic before conversion.
#[inline]
pub fn e_frac(num: i128, den: u64) -> Complex64 {
    debug_assert!(den > 0);
    let den_i = den as i128;
    let mut r = num.rem_euclid(den_i);
    // Symmetric representative keeps |angle| <= π.
    if 2 * r > den_i {
        r -= den_i;
    }
    let angle = TAU * (r as f64 / den as f64);
    let (s, c) = angle.sin_cos();
    Complex64::new(c, s)
}

/// e(x) for a real argument; reduces by the integer part first.
#[inline]
pub fn e_real(x: f64) -> Complex64 {
    let f = x - x.round();
    let (s, c) = (TAU * f).sin_cos();
    Complex64::new(c, s)
}

/// Table of e(j/c) for j in 0..c.
#[derive(Debug, Clone)]
pub struct UnitRoots {
    modulus: u64,
    table: Vec<Complex64>,
}

impl UnitRoots {
    pub fn new(modulus: u64) -> Self {
        let table = (0..modulus).map(|j| e_frac(j as i128, modulus)).collect();
        Self { modulus, table }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    #[inline]
    pub fn at(&self, residue: u64) -> Complex64 {
        self.table[(residue % self.modulus) as usize]
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    #[inline]
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated complex accumulator.
///
/// The error bound is `count · 4ε · Σ|term|` plus any error already attached
/// to the added terms. For unit-modulus terms this is `n · 4ε · n`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Accumulator {
    re: Neumaier,
    im: Neumaier,
    count: u64,
    abs_sum: f64,
    carried: f64,
}

impl Accumulator {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
        self.count += 1;
        self.abs_sum += z.re.abs() + z.im.abs();
    }

    /// Add a term that already carries its own error bound.
    #[inline]
    pub fn add_sum(&mut self, s: UnitRootSum) {
        self.add(s.value);
        self.carried += s.err;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    /// Merge a later partial sum into this one, in order.
    pub fn absorb(&mut self, other: &Accumulator) {
        self.re.add(other.re.sum);
        self.re.add(other.re.comp);
        self.im.add(other.im.sum);
        self.im.add(other.im.comp);
        self.count += other.count;
        self.abs_sum += other.abs_sum;
        self.carried += other.carried;
    }

    pub fn finish(&self) -> UnitRootSum {
        let value = Complex64::new(self.re.value(), self.im.value());
        let err = self.count as f64 * 4.0 * f64::EPSILON * self.abs_sum + self.carried;
        UnitRootSum::new(value, err)
    }
}
