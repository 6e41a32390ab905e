//! Verification suites, one per acceptance criterion, with serializable
//! reports. Every suite is deterministic: parallel work is collected in input
//! order before any reduction.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bessel::{bessel_recurrence, bessel_series, bound_report, HalfOrder};
use crate::error::{Error, Result};
use crate::hsums::{h_brute, h_closed_coprime, h_factor_sides, h_fast, weil_report_for, HSumRequest, IndexData, Sign};
use crate::iwaniec::{
    crossover, delta_of, endgame_exponent, p_ge_t_condition, p_ge_t_threshold, sigma_grid, sigma_max, theorem_exponent,
    theorem_exponent_check, EndgameReport,
};
use crate::jacobiforms::{phi_cusp, DEFAULT_CUTOFF};
use crate::modarith::{divisors, gauss_closed, gauss_sum, gcd, ramanujan_brute, ramanujan_sum, selberg_sides};
use crate::petersson::{ratio_check, zero_dim_check, CoefficientPair, DimensionFacts, RatioReport, ZeroDimReport};
use crate::tolerances::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    ClosedForm,
    Factorization,
    Weil,
    Gauss,
    SelbergRamanujan,
    Vanishing,
    Ratios,
    Endgame,
    Bessel,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::ClosedForm,
        Suite::Factorization,
        Suite::Weil,
        Suite::Gauss,
        Suite::SelbergRamanujan,
        Suite::Vanishing,
        Suite::Ratios,
        Suite::Endgame,
        Suite::Bessel,
    ];

    pub fn criterion(self) -> u8 {
        Self::ALL.iter().position(|&s| s == self).expect("listed") as u8 + 1
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::ClosedForm => "closed-form",
            Suite::Factorization => "factorization",
            Suite::Weil => "weil",
            Suite::Gauss => "gauss",
            Suite::SelbergRamanujan => "selberg-ramanujan",
            Suite::Vanishing => "vanishing",
            Suite::Ratios => "ratios",
            Suite::Endgame => "endgame",
            Suite::Bessel => "bessel",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|x| x.name() == s || x.criterion().to_string() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite {s:?}")))
    }
}

/// Sizes that the acceptance criteria pin; lowered only for smoke tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct VerifyConfig {
    pub zero_dim_c_max: u64,
    pub ratio_c_max: u64,
    pub jacobi_cutoff: i64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            zero_dim_c_max: ZERO_DIM_C_MAX,
            ratio_c_max: RATIO_C_MAX,
            jacobi_cutoff: DEFAULT_CUTOFF,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub criterion: u8,
    pub suite: &'static str,
    pub pass: bool,
    pub cases: u64,
    pub failures: u64,
    /// Smallest slack (bound minus observed) over all cases, where defined.
    pub worst_margin: Option<f64>,
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vanishing: Option<Vec<ZeroDimReport>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratios: Option<Vec<RatioReport>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub endgame: Option<Vec<EndgameReport>>,
}

/// Outcome of one elementary comparison.
struct Case {
    ok: bool,
    margin: Option<f64>,
    what: String,
}

impl Case {
    fn new(ok: bool, margin: Option<f64>, what: impl FnOnce() -> String) -> Self {
        Self {
            ok,
            margin,
            what: if ok { String::new() } else { what() },
        }
    }
}

const MAX_FAILURE_NOTES: usize = 5;

#[derive(Default)]
struct Tally {
    cases: u64,
    failures: u64,
    worst: Option<f64>,
    notes: Vec<String>,
}

impl Tally {
    fn push(&mut self, c: Case) {
        self.cases += 1;
        if let Some(m) = c.margin {
            self.worst = Some(self.worst.map_or(m, |w: f64| w.min(m)));
        }
        if !c.ok {
            self.failures += 1;
            if self.notes.len() < MAX_FAILURE_NOTES {
                self.notes.push(c.what);
            }
        }
    }

    fn extend(&mut self, cs: impl IntoIterator<Item = Case>) {
        for c in cs {
            self.push(c);
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    fn report(self, suite: Suite) -> SuiteReport {
        SuiteReport {
            criterion: suite.criterion(),
            suite: suite.name(),
            pass: self.failures == 0 && self.cases > 0,
            cases: self.cases,
            failures: self.failures,
            worst_margin: self.worst,
            notes: self.notes,
            vanishing: None,
            ratios: None,
            endgame: None,
        }
    }
}

/// The fixed index set of the closed-form criterion.
pub fn fixed_indices() -> Vec<IndexData> {
    const SET: [(i64, i64, i64); 25] = [
        (1, 1, 1),
        (1, 1, 0),
        (1, 2, 1),
        (1, 2, 0),
        (1, 3, 1),
        (1, 5, 1),
        (1, 6, 1),
        (1, 4, 3),
        (2, 1, 1),
        (2, 1, 0),
        (2, 2, 2),
        (2, 3, 1),
        (2, 5, 3),
        (3, 1, 1),
        (3, 2, 3),
        (3, 4, 1),
        (3, 7, 5),
        (4, 1, 1),
        (4, 3, 2),
        (4, 5, 5),
        (5, 1, 1),
        (5, 2, 3),
        (5, 6, 7),
        (6, 5, 1),
        (7, 3, 4),
    ];
    SET.iter()
        .map(|&(m, n, r)| IndexData::new(m, n, r).expect("valid fixed index"))
        .collect()
}

pub const RANDOM_INDEX_SEED: u64 = 0x4a41_434f_4249;

/// 25 seeded random indices with m ≤ 6, n ≤ 20, |r| ≤ 10.
pub fn random_indices() -> Vec<IndexData> {
    let mut rng = ChaCha8Rng::seed_from_u64(RANDOM_INDEX_SEED);
    let mut out = Vec::with_capacity(25);
    while out.len() < 25 {
        let (m, n, r) = (rng.gen_range(1..=6), rng.gen_range(1..=20), rng.gen_range(-10..=10));
        if let Ok(ix) = IndexData::new(m, n, r) {
            out.push(ix);
        }
    }
    out
}

/// Indices realizing the fundamental discriminants −3, −4, −7, −8, −11 at
/// several levels m.
pub fn fundamental_families() -> Vec<IndexData> {
    const SET: [(i64, i64, i64); 15] = [
        (1, 1, 1),
        (3, 1, 3),
        (7, 1, 5),
        (1, 1, 0),
        (1, 2, 2),
        (5, 1, 4),
        (1, 2, 1),
        (2, 1, 1),
        (4, 2, 5),
        (1, 2, 0),
        (2, 1, 0),
        (3, 1, 2),
        (1, 3, 1),
        (3, 1, 1),
        (5, 1, 3),
    ];
    SET.iter()
        .map(|&(m, n, r)| IndexData::new(m, n, r).expect("valid family index"))
        .collect()
}

fn coprime(a: i128, b: i128) -> bool {
    gcd(a, b) == 1
}

fn closed_form_cases(ix: &IndexData) -> Vec<Case> {
    let bad = 2 * ix.m as i128 * ix.d as i128;
    let mut out = Vec::new();
    for c in 1..=200u64 {
        if !coprime(c as i128, bad) {
            continue;
        }
        for sign in Sign::BOTH {
            let req = HSumRequest::new(*ix, c, sign).expect("c ≥ 1");
            let a = h_closed_coprime(&req).expect("coprime modulus");
            let b = h_brute(&req);
            let margin = a.err + b.err + CLOSED_FORM_SLACK - (a.value - b.value).norm();
            out.push(Case::new(margin >= 0.0, Some(margin), || {
                format!("{req:?}: closed {a:?} vs brute {b:?}")
            }));
        }
    }
    out
}

pub fn closed_form_suite() -> SuiteReport {
    let per: Vec<Vec<Case>> = fixed_indices().par_iter().map(closed_form_cases).collect();
    let mut t = Tally::default();
    per.into_iter().for_each(|v| t.extend(v));
    t.report(Suite::ClosedForm)
}

fn factorization_cases(ix: &IndexData) -> Vec<Case> {
    let mut out = Vec::new();
    for c in 2..=300u64 {
        for c1 in divisors(c) {
            let c2 = c / c1;
            if !coprime(c1 as i128, c2 as i128) {
                continue;
            }
            for sign in Sign::BOTH {
                let (lhs, rhs) = h_factor_sides(ix, c1, c2, sign).expect("coprime split");
                let margin = lhs.err + rhs.err - (lhs.value - rhs.value).norm();
                out.push(Case::new(margin >= 0.0, Some(margin), || {
                    format!("{ix:?} c = {c1}·{c2} {sign}: {lhs:?} vs {rhs:?}")
                }));
            }
        }
    }
    out
}

pub fn factorization_suite() -> SuiteReport {
    let per: Vec<Vec<Case>> = random_indices().par_iter().map(factorization_cases).collect();
    let mut t = Tally::default();
    per.into_iter().for_each(|v| t.extend(v));
    t.report(Suite::Factorization)
}

fn weil_cases(ix: &IndexData, moduli: impl Iterator<Item = u64>) -> Vec<Case> {
    let mut out = Vec::new();
    for c in moduli {
        for sign in Sign::BOTH {
            let req = HSumRequest::new(*ix, c, sign).expect("c ≥ 1");
            let rep = weil_report_for(&req, h_fast(&req));
            let bound = rep
                .fundamental_bound
                .map_or(rep.general_bound, |f| f.min(rep.general_bound));
            let margin = bound + rep.err - rep.abs;
            out.push(Case::new(rep.pass, Some(margin), || format!("{req:?}: {rep:?}")));
        }
    }
    out
}

pub fn weil_suite() -> SuiteReport {
    let fixed: Vec<Vec<Case>> = fixed_indices()
        .par_iter()
        .map(|ix| {
            let bad = 2 * ix.m as i128 * ix.d as i128;
            weil_cases(ix, (1..=200u64).filter(move |&c| coprime(c as i128, bad)))
        })
        .collect();
    let random: Vec<Vec<Case>> = random_indices().par_iter().map(|ix| weil_cases(ix, 1..=300)).collect();
    let families: Vec<Vec<Case>> = fundamental_families()
        .par_iter()
        .map(|ix| weil_cases(ix, 1..=300))
        .collect();
    let mut t = Tally::default();
    fixed
        .into_iter()
        .chain(random)
        .chain(families)
        .for_each(|v| t.extend(v));
    t.note(
        "closed-form set (c ≤ 200 coprime), factorization set (c ≤ 300), D ∈ {−3, −4, −7, −8, −11} families (c ≤ 300)",
    );
    t.report(Suite::Weil)
}

pub fn gauss_suite() -> SuiteReport {
    let per: Vec<Vec<Case>> = (1..=499u64)
        .into_par_iter()
        .filter(|c| c % 2 == 1)
        .map(|c| {
            (0..c as i64)
                .filter(|&a| coprime(a as i128, c as i128))
                .map(|a| {
                    let brute = gauss_sum(a, c).expect("odd coprime");
                    let closed = gauss_closed(a, c).expect("odd coprime").value;
                    let margin = brute.err + GAUSS_SLACK - (brute.value - closed).norm();
                    Case::new(margin >= 0.0, Some(margin), || {
                        format!("a = {a}, c = {c}: {brute:?} vs {closed}")
                    })
                })
                .collect()
        })
        .collect();
    let mut t = Tally::default();
    per.into_iter().for_each(|v| t.extend(v));
    t.report(Suite::Gauss)
}

pub fn selberg_ramanujan_suite() -> SuiteReport {
    let selberg: Vec<Vec<Case>> = (1..=40u64)
        .into_par_iter()
        .map(|c| {
            let mut v = Vec::new();
            for y in 1..=c as i64 {
                for a in 1..=c as i64 {
                    let (lhs, rhs) = selberg_sides(y, a, c).expect("c ≥ 1");
                    let margin = lhs.err + rhs.err - (lhs.value - rhs.value).norm();
                    v.push(Case::new(margin >= 0.0, Some(margin), || {
                        format!("Selberg y = {y}, a = {a}, c = {c}")
                    }));
                }
            }
            v
        })
        .collect();
    let ramanujan: Vec<Vec<Case>> = (1..=200u64)
        .into_par_iter()
        .map(|c| {
            (0..=c as i64)
                .map(|a| {
                    let closed = ramanujan_sum(a, c).expect("c ≥ 1");
                    let brute = ramanujan_brute(a, c);
                    let exact = brute.value.re.round() as i64 == closed;
                    let margin = brute.err - (brute.value - num_complex::Complex64::new(closed as f64, 0.0)).norm();
                    let bounded = closed.unsigned_abs() <= gcd(a as i128, c as i128);
                    Case::new(exact && margin >= 0.0 && bounded, None, || {
                        format!("Ramanujan a = {a}, c = {c}: closed {closed}, brute {brute:?}")
                    })
                })
                .collect()
        })
        .collect();
    let mut t = Tally::default();
    selberg.into_iter().chain(ramanujan).for_each(|v| t.extend(v));
    t.note("Selberg: 1 ≤ y, a ≤ c ≤ 40; Ramanujan: 0 ≤ a ≤ c ≤ 200");
    t.report(Suite::SelbergRamanujan)
}

pub const VANISHING_SAMPLES: [(i64, i64); 5] = [(1, 1), (1, 0), (2, 1), (2, 0), (3, 1)];
pub const VANISHING_WEIGHTS: [i64; 3] = [4, 6, 8];

pub fn vanishing_suite(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let facts = DimensionFacts::builtin();
    let mut t = Tally::default();
    let mut reports = Vec::new();
    for k in VANISHING_WEIGHTS {
        let rep = zero_dim_check(&facts, k, &VANISHING_SAMPLES, cfg.zero_dim_c_max, ZERO_DIM_TOLERANCE)?;
        for s in &rep.samples {
            t.push(Case::new(s.pass, Some(s.margin), || {
                format!(
                    "k = {k}, (n, r) = ({}, {}): |value| = {:e}, tail = {:e}",
                    s.n,
                    s.r,
                    s.value.abs(),
                    s.tail
                )
            }));
        }
        reports.push(rep);
    }
    t.note(format!(
        "C_max = {}, tolerance = {ZERO_DIM_TOLERANCE:e}",
        cfg.zero_dim_c_max
    ));
    let mut out = t.report(Suite::Vanishing);
    out.vanishing = Some(reports);
    Ok(out)
}

pub const RATIO_PAIRS: [CoefficientPair; 6] = [
    ((1, 1), (1, 0)),
    ((2, 1), (1, 0)),
    ((2, 0), (1, 1)),
    ((3, 1), (2, 1)),
    ((3, 0), (2, 0)),
    ((1, 1), (1, -1)),
];

pub fn ratios_suite(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let facts = DimensionFacts::builtin();
    let mut t = Tally::default();
    let mut reports = Vec::new();
    for k in [10, 12] {
        let table = phi_cusp(k, cfg.jacobi_cutoff)?;
        let rep = ratio_check(&facts, &table, &RATIO_PAIRS, cfg.ratio_c_max)?;
        for p in &rep.pairs {
            let margin = p.rel_err.map(|e| p.tolerance - e);
            t.push(Case::new(p.pass, margin, || format!("k = {k}: {p:?}")));
        }
        t.push(Case::new(rep.compared >= RATIO_MIN_PAIRS, None, || {
            format!("k = {k}: only {} pairs compared", rep.compared)
        }));
        reports.push(rep);
    }
    t.note(format!(
        "C_max = {}, Fourier tables to n ≤ {}",
        cfg.ratio_c_max, cfg.jacobi_cutoff
    ));
    let mut out = t.report(Suite::Ratios);
    out.ratios = Some(reports);
    Ok(out)
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn endgame_suite() -> Result<SuiteReport> {
    let mut t = Tally::default();
    let mut exact = |ok: bool, what: &str| t.push(Case::new(ok, None, || what.to_string()));
    let zero = endgame_exponent(&rat(0, 1))?;
    let cross = endgame_exponent(&crossover())?;
    let top = endgame_exponent(&sigma_max())?;
    exact(delta_of(&rat(0, 1)) == rat(1, 24), "δ(0) = 1/24");
    exact(zero.exponent == rat(-1, 24), "exponent at σ = 0 is −1/24");
    exact(
        cross.low_exponent == rat(-1, 31) && cross.high_exponent == rat(-1, 31),
        "both cases −1/31 at σ = 21/155",
    );
    exact(top.exponent == rat(0, 1), "exponent 0 at σ = 7/25");
    let th = p_ge_t_threshold();
    let step = rat(1, 1_000_000);
    exact(th == rat(39, 121), "threshold is 39/121");
    exact(
        p_ge_t_condition(&th) && !p_ge_t_condition(&(&th + &step)) && p_ge_t_condition(&(&th - &step)),
        "P ≥ T holds exactly up to σ = 39/121",
    );
    exact(
        theorem_exponent(&crossover()) == rat(-2, 93),
        "theorem exponent −2/93 at σ = 21/155",
    );
    for s in sigma_grid() {
        let c = theorem_exponent_check(&s)?;
        let want_equal = s == rat(0, 1) || s == sigma_max();
        t.push(Case::new(c.holds && c.equal == want_equal, None, || {
            format!("theorem check at σ = {s}: {c:?}")
        }));
    }
    let mut out = t.report(Suite::Endgame);
    out.endgame = Some(vec![zero, cross, top]);
    Ok(out)
}

pub const BESSEL_GRID_POINTS: usize = 600;
pub const BESSEL_CROSSOVER_POINTS: usize = 400;

pub fn bessel_suite() -> Result<SuiteReport> {
    let per: Vec<Result<Vec<Case>>> = (2..=10i64)
        .into_par_iter()
        .map(|h| {
            let k = 2 * h;
            let order = HalfOrder::from_weight(k)?;
            let mut v = Vec::new();
            for i in 0..BESSEL_GRID_POINTS {
                let x = 10f64.powf(-4.0 + 10.0 * i as f64 / (BESSEL_GRID_POINTS - 1) as f64);
                let b = bound_report(order, x)?;
                let margin = (b.power_bound - b.value.abs()) / b.power_bound;
                v.push(Case::new(b.pass(), Some(margin), || format!("k = {k}: {b:?}")));
            }
            let nu = order.nu();
            for i in 0..BESSEL_CROSSOVER_POINTS {
                let x = nu / 2.0 + 1.5 * nu * i as f64 / (BESSEL_CROSSOVER_POINTS - 1) as f64;
                let s = bessel_series(order, x)?.value;
                let r = bessel_recurrence(order, x)?;
                let margin = BESSEL_BRANCH_AGREEMENT - (s - r).abs();
                v.push(Case::new(margin >= 0.0, Some(margin), || {
                    format!("k = {k}, x = {x}: series {s} vs recurrence {r}")
                }));
            }
            Ok(v)
        })
        .collect();
    let mut t = Tally::default();
    for v in per {
        t.extend(v?);
    }
    t.note("k = 4..20; log grid x ∈ [1e-4, 1e6]; crossover x ∈ [ν/2, 2ν]; power-bound margins are relative");
    Ok(t.report(Suite::Bessel))
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Result<SuiteReport> {
    match suite {
        Suite::ClosedForm => Ok(closed_form_suite()),
        Suite::Factorization => Ok(factorization_suite()),
        Suite::Weil => Ok(weil_suite()),
        Suite::Gauss => Ok(gauss_suite()),
        Suite::SelbergRamanujan => Ok(selberg_ramanujan_suite()),
        Suite::Vanishing => vanishing_suite(cfg),
        Suite::Ratios => ratios_suite(cfg),
        Suite::Endgame => endgame_suite(),
        Suite::Bessel => bessel_suite(),
    }
}
