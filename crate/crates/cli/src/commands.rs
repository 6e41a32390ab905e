use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

use salie_core::hsums::{bad_split, h_brute, h_closed_coprime, h_fast, h_reduced, weil_report_for};
use salie_core::iwaniec::{decay_csv, decay_rows, endgame_exponent, parse_rational, theorem_exponent_check};
use salie_core::jacobiforms::{coeff, phi_cusp, phi_weak, FourierTable, WeakKind, DEFAULT_CUTOFF};
use salie_core::modarith::{gauss_closed, gauss_sum, gcd, salie_closed, salie_sum};
use salie_core::petersson::{
    geometric_side, lambda_km, ratio_check, zero_dim_check, CoefficientPair, DimensionFacts, PeterssonJob,
};
use salie_core::tolerances::{CLOSED_FORM_SLACK, GAUSS_SLACK, RATIO_C_MAX, ZERO_DIM_C_MAX, ZERO_DIM_TOLERANCE};
use salie_core::verify::{run_suite, Suite, VerifyConfig, RATIO_PAIRS, VANISHING_SAMPLES};
use salie_core::{Error, HSumRequest, IndexData, Result, Sign, UnitRootSum};

use crate::report::{Format, Outcome};

/// Kloosterman-type sums for Jacobi forms, Petersson geometric sides and
/// exponent bookkeeping.
#[derive(Debug, Parser)]
#[command(name = "salie", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub output: Format,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Report wall-clock time; otherwise `elapsed_ms` is null so that
    /// repeated runs are byte-identical.
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate H^±_{m,c}(n, r) and cross-check it.
    Hsum(HsumArgs),
    /// Quadratic Gauss sum against its closed form.
    Gauss(GaussArgs),
    /// Salié sum against its closed form.
    Salie(SalieArgs),
    /// Truncated geometric side of the Petersson formula.
    Petersson(PeterssonArgs),
    /// Vanishing check on a zero-dimensional space of cusp forms.
    ZeroDim(ZeroDimArgs),
    /// Coefficient-ratio check on a one-dimensional space of cusp forms.
    Ratio(RatioArgs),
    /// Exact endgame exponents for m = |D|^σ.
    Exponents(ExponentsArgs),
    /// |V_a| decay measurements.
    Decay(DecayArgs),
    /// Fourier coefficient table of an index-1 Jacobi form.
    Table(TableArgs),
    /// Run acceptance suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Fast,
    Brute,
    Closed,
    Reduced,
}

#[derive(Debug, Args, Serialize)]
pub struct IndexArgs {
    #[arg(long)]
    pub m: i64,
    #[arg(long)]
    pub n: i64,
    #[arg(long, allow_negative_numbers = true)]
    pub r: i64,
}

impl IndexArgs {
    fn index(&self) -> Result<IndexData> {
        IndexData::new(self.m, self.n, self.r)
    }
}

#[derive(Debug, Args, Serialize)]
pub struct HsumArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub index: IndexArgs,
    #[arg(long)]
    pub c: u64,
    /// + or -
    #[arg(long, allow_hyphen_values = true, value_parser = parse_sign, default_value = "+")]
    pub sign: Sign,
    #[arg(long, value_enum, default_value_t = Method::Fast)]
    pub method: Method,
    /// Largest c for which the O(c²) brute-force cross-check runs.
    #[arg(long, default_value_t = 3000)]
    pub brute_limit: u64,
}

fn parse_sign(s: &str) -> std::result::Result<Sign, String> {
    s.parse::<Sign>().map_err(|e| e.to_string())
}

#[derive(Debug, Args, Serialize)]
pub struct GaussArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub a: i64,
    #[arg(long)]
    pub c: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct SalieArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub a: i64,
    #[arg(long, allow_negative_numbers = true)]
    pub b: i64,
    #[arg(long)]
    pub c: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct PeterssonArgs {
    #[arg(long)]
    pub k: i64,
    #[command(flatten)]
    #[serde(flatten)]
    pub index: IndexArgs,
    #[arg(long, default_value_t = 1)]
    pub level: u64,
    #[arg(long, default_value_t = 10_000)]
    pub c_max: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct ZeroDimArgs {
    #[arg(long)]
    pub k: i64,
    /// Sample "n,r"; repeatable.
    #[arg(long = "sample", value_parser = parse_pair)]
    pub samples: Vec<(i64, i64)>,
    #[arg(long, default_value_t = ZERO_DIM_C_MAX)]
    pub c_max: u64,
    #[arg(long, default_value_t = ZERO_DIM_TOLERANCE)]
    pub tolerance: f64,
    /// Dimension table "k,m,dim" (default: bundled).
    #[arg(long)]
    pub dimensions: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct RatioArgs {
    #[arg(long)]
    pub k: i64,
    /// Pair "n1,r1:n2,r2"; repeatable.
    #[arg(long = "pair", value_parser = parse_pair_of_pairs)]
    pub pairs: Vec<CoefficientPair>,
    #[arg(long, default_value_t = RATIO_C_MAX)]
    pub c_max: u64,
    #[arg(long, default_value_t = DEFAULT_CUTOFF)]
    pub cutoff: i64,
    #[arg(long)]
    pub dimensions: Option<PathBuf>,
}

fn parse_pair(s: &str) -> std::result::Result<(i64, i64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected n,r, got {s:?}"))?;
    let p = |x: &str| x.trim().parse::<i64>().map_err(|_| format!("expected n,r, got {s:?}"));
    Ok((p(a)?, p(b)?))
}

fn parse_pair_of_pairs(s: &str) -> std::result::Result<CoefficientPair, String> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| format!("expected n1,r1:n2,r2, got {s:?}"))?;
    Ok((parse_pair(a)?, parse_pair(b)?))
}

#[derive(Debug, Args, Serialize)]
pub struct ExponentsArgs {
    /// σ as an exact rational p/q.
    #[arg(long, value_parser = parse_sigma)]
    #[serde(serialize_with = "salie_core::iwaniec::serialize_rational")]
    pub sigma: BigRational,
}

fn parse_sigma(s: &str) -> std::result::Result<BigRational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Debug, Args, Serialize)]
pub struct DecayArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub index: IndexArgs,
    #[arg(long, default_value_t = 20)]
    pub a_max: u64,
    #[arg(long, default_value_t = 1)]
    pub t: u64,
    #[arg(long, default_value_t = 1)]
    pub s: u64,
    /// Upper ends B of the b-range; repeatable.
    #[arg(long = "b", default_values_t = [100u64, 1000])]
    pub bs: Vec<u64>,
    /// Lower threshold C (b·a·t > C).
    #[arg(long = "lower", default_value_t = 10)]
    pub lower: u64,
    #[arg(long, default_value_t = 5)]
    pub p: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct TableArgs {
    /// Weight: -2 or 0 (weak), 10 or 12 (cusp).
    #[arg(long, allow_negative_numbers = true)]
    pub k: i64,
    #[arg(long, default_value_t = DEFAULT_CUTOFF)]
    pub cutoff: i64,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    /// "all", a suite name, or a criterion number.
    #[arg(long, default_value = "all")]
    pub suite: String,
    #[arg(long, default_value_t = ZERO_DIM_C_MAX, hide = true)]
    pub zero_dim_c_max: u64,
    #[arg(long, default_value_t = RATIO_C_MAX, hide = true)]
    pub ratio_c_max: u64,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Hsum(_) => "hsum",
            Command::Gauss(_) => "gauss",
            Command::Salie(_) => "salie",
            Command::Petersson(_) => "petersson",
            Command::ZeroDim(_) => "zero-dim",
            Command::Ratio(_) => "ratio",
            Command::Exponents(_) => "exponents",
            Command::Decay(_) => "decay",
            Command::Table(_) => "table",
            Command::Verify(_) => "verify",
        }
    }

    pub fn params(&self) -> Value {
        let v = match self {
            Command::Hsum(a) => serde_json::to_value(a),
            Command::Gauss(a) => serde_json::to_value(a),
            Command::Salie(a) => serde_json::to_value(a),
            Command::Petersson(a) => serde_json::to_value(a),
            Command::ZeroDim(a) => serde_json::to_value(a),
            Command::Ratio(a) => serde_json::to_value(a),
            Command::Exponents(a) => serde_json::to_value(a),
            Command::Decay(a) => serde_json::to_value(a),
            Command::Table(a) => serde_json::to_value(a),
            Command::Verify(a) => serde_json::to_value(a),
        };
        v.expect("parameters serialize")
    }
}

pub fn run(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Hsum(a) => hsum(a),
        Command::Gauss(a) => gauss(a),
        Command::Salie(a) => salie(a),
        Command::Petersson(a) => petersson(a),
        Command::ZeroDim(a) => zero_dim(a),
        Command::Ratio(a) => ratio(a),
        Command::Exponents(a) => exponents(a),
        Command::Decay(a) => decay(a),
        Command::Table(a) => table(a),
        Command::Verify(a) => verify(a),
    }
}

fn fmt_sum(s: &UnitRootSum) -> String {
    format!("{:.12} {:+.12}i  (err {:.2e})", s.value.re, s.value.im, s.err)
}

fn hsum(a: &HsumArgs) -> Result<Outcome> {
    let ix = a.index.index()?;
    let req = HSumRequest::new(ix, a.c, a.sign)?;
    let coprime = gcd(a.c as i128, 2 * ix.m as i128 * ix.d as i128) == 1;
    let closed = coprime.then(|| h_closed_coprime(&req)).transpose()?;
    let brute = (a.c <= a.brute_limit || a.method == Method::Brute).then(|| h_brute(&req));
    let value = match a.method {
        Method::Fast => h_fast(&req),
        Method::Reduced => h_reduced(&req),
        Method::Brute => brute.expect("computed for the brute method"),
        Method::Closed => closed.ok_or_else(|| {
            Error::PreconditionViolated(format!(
                "closed form needs gcd(c, 2mD) = 1; c = {}, 2mD = {}",
                a.c,
                2 * ix.m * ix.d
            ))
        })?,
    };
    let agree_closed = closed.map(|c| c.agrees_with(&value, CLOSED_FORM_SLACK));
    let agree_brute = brute.map(|b| b.agrees_with(&value, CLOSED_FORM_SLACK));
    let weil = weil_report_for(&req, value);
    let (q, t) = bad_split(a.c, ix.m, ix.d);
    let pass = agree_closed.unwrap_or(true) && agree_brute.unwrap_or(true) && weil.pass;
    let mut text = format!(
        "H^{}_{{{},{}}}({}, {}) = {}\n",
        a.sign,
        ix.m,
        a.c,
        ix.n,
        ix.r,
        fmt_sum(&value)
    );
    let _ = writeln!(text, "D = {}, split c = {q}·{t}", ix.d);
    if let Some(ok) = agree_closed {
        let _ = writeln!(text, "closed form agrees: {ok}");
    }
    if let Some(ok) = agree_brute {
        let _ = writeln!(text, "brute force agrees: {ok}");
    }
    let _ = writeln!(text, "Weil bound {:.6} holds: {}", weil.general_bound, weil.pass);
    let result = json!({
        "index": ix,
        "value": value,
        "closed_form": closed,
        "brute": brute,
        "agrees_with_closed_form": agree_closed,
        "agrees_with_brute": agree_brute,
        "weil": weil,
        "split": {"q": q, "t": t},
    });
    Ok(Outcome::new(result, text).err_bound(value.err).pass(pass))
}

fn gauss(a: &GaussArgs) -> Result<Outcome> {
    let brute = gauss_sum(a.a, a.c)?;
    let closed = gauss_closed(a.a, a.c)?;
    let ok = brute.agrees_with(&UnitRootSum::exact(closed.value), GAUSS_SLACK);
    let text = format!(
        "G({}, {}) = {}\nclosed form ε·(a/c)·√c = {:.12} {:+.12}i, agrees: {ok}\n",
        a.a,
        a.c,
        fmt_sum(&brute),
        closed.value.re,
        closed.value.im
    );
    let result = json!({"brute": brute, "closed": closed, "agrees": ok});
    Ok(Outcome::new(result, text).err_bound(brute.err).pass(ok))
}

fn salie(a: &SalieArgs) -> Result<Outcome> {
    let brute = salie_sum(a.a, a.b, a.c)?;
    let coprime = gcd(a.a as i128 * a.b as i128, a.c as i128) == 1;
    let closed = coprime.then(|| salie_closed(a.a, a.b, a.c)).transpose()?;
    let ok = closed.map(|c| brute.agrees_with(&c, GAUSS_SLACK));
    let mut text = format!("T({}, {}; {}) = {}\n", a.a, a.b, a.c, fmt_sum(&brute));
    match ok {
        Some(ok) => {
            let _ = writeln!(text, "closed form agrees: {ok}");
        }
        None => text.push_str("closed form not applicable (gcd(ab, c) > 1)\n"),
    }
    let result = json!({"brute": brute, "closed": closed, "agrees": ok});
    let mut out = Outcome::new(result, text).err_bound(brute.err);
    if let Some(ok) = ok {
        out = out.pass(ok);
    }
    Ok(out)
}

fn petersson(a: &PeterssonArgs) -> Result<Outcome> {
    let ix = a.index.index()?;
    let job = PeterssonJob::new(a.k, ix, a.level, a.c_max)?;
    let side = geometric_side(&job)?;
    let lambda = lambda_km(a.k, ix.m, ix.d)?;
    let real = side.is_real_within_bounds();
    let mut text = format!(
        "geometric side (k = {}, m = {}, n = {}, r = {}, N = {}, C_max = {}): {}\n",
        a.k,
        ix.m,
        ix.n,
        ix.r,
        a.level,
        a.c_max,
        fmt_sum(&side.value)
    );
    if side.terms == 0 {
        text.push_str("warning: empty c-range (C_max < N); value is 1\n");
    }
    let _ = writeln!(
        text,
        "tail ≤ {:.3e}, λ_{{k,m}}(D) = {:.12e}, imaginary part within bounds: {real}",
        side.tail, lambda
    );
    let result = json!({"index": ix, "side": side, "lambda": lambda, "real_within_bounds": real});
    Ok(Outcome::new(result, text)
        .err_bound(side.value.err)
        .tail(side.tail)
        .pass(real))
}

fn facts(path: &Option<PathBuf>) -> Result<DimensionFacts> {
    match path {
        Some(p) => DimensionFacts::from_path(p),
        None => Ok(DimensionFacts::builtin()),
    }
}

fn zero_dim(a: &ZeroDimArgs) -> Result<Outcome> {
    let samples = if a.samples.is_empty() {
        VANISHING_SAMPLES.to_vec()
    } else {
        a.samples.clone()
    };
    let rep = zero_dim_check(&facts(&a.dimensions)?, a.k, &samples, a.c_max, a.tolerance)?;
    let mut text = String::new();
    let mut csv = String::from("k,n,r,D,abs_value,err,tail,tolerance,margin,pass\n");
    for s in &rep.samples {
        let _ = writeln!(
            text,
            "k = {}, (n, r) = ({}, {}): |value| = {:.3e}, tail = {:.3e}, margin = {:.3e}, {}",
            rep.k,
            s.n,
            s.r,
            s.value.abs(),
            s.tail,
            s.margin,
            if s.pass { "pass" } else { "FAIL" }
        );
        let _ = writeln!(
            csv,
            "{},{},{},{},{:e},{:e},{:e},{:e},{:e},{}",
            rep.k,
            s.n,
            s.r,
            s.d,
            s.value.abs(),
            s.value.err,
            s.tail,
            s.tolerance,
            s.margin,
            s.pass
        );
    }
    let tail = rep.samples.iter().map(|s| s.tail).fold(0.0, f64::max);
    let err = rep.samples.iter().map(|s| s.value.err).fold(0.0, f64::max);
    let pass = rep.pass;
    Ok(Outcome::new(rep, text).err_bound(err).tail(tail).pass(pass).csv(csv))
}

fn ratio(a: &RatioArgs) -> Result<Outcome> {
    let pairs = if a.pairs.is_empty() {
        RATIO_PAIRS.to_vec()
    } else {
        a.pairs.clone()
    };
    let table = phi_cusp(a.k, a.cutoff)?;
    let rep = ratio_check(&facts(&a.dimensions)?, &table, &pairs, a.c_max)?;
    let mut text = String::new();
    let mut csv = String::from("k,n1,r1,n2,r2,observed,expected,rel_err,tolerance,pass\n");
    for p in &rep.pairs {
        let obs = p.observed.map_or("-".into(), |v| format!("{v:.12}"));
        let exp = p.expected.clone().unwrap_or_else(|| "-".into());
        let rel = p.rel_err.map_or("-".into(), |v| format!("{v:.3e}"));
        let _ = writeln!(
            text,
            "k = {}: ({}, {}) / ({}, {}): observed {obs}, expected {exp}, rel. error {rel}, {}{}",
            rep.k,
            p.first.0,
            p.first.1,
            p.second.0,
            p.second.1,
            if p.pass { "pass" } else { "FAIL" },
            p.note.as_ref().map_or(String::new(), |n| format!(" ({n})"))
        );
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{},{},{:e},{}",
            rep.k,
            p.first.0,
            p.first.1,
            p.second.0,
            p.second.1,
            p.observed.map_or(String::new(), |v| format!("{v:e}")),
            exp,
            p.rel_err.map_or(String::new(), |v| format!("{v:e}")),
            p.tolerance,
            p.pass
        );
    }
    let tail = rep.pairs.iter().map(|p| p.tail.0.max(p.tail.1)).fold(0.0, f64::max);
    let pass = rep.pass;
    Ok(Outcome::new(rep, text).tail(tail).pass(pass).csv(csv))
}

fn exponents(a: &ExponentsArgs) -> Result<Outcome> {
    let rep = endgame_exponent(&a.sigma)?;
    let check = theorem_exponent_check(&a.sigma)?;
    let text = format!(
        "σ = {}: δ = {}, exponent = {} ({:?}), theorem exponent = {} (≥ case: {}), P ≥ T: {}\n",
        a.sigma, rep.delta, rep.exponent, rep.regime, check.theorem, check.holds, rep.p_ge_t
    );
    let mut result = serde_json::to_value(&rep).expect("report serializes");
    result["theorem"] = serde_json::to_value(&check).expect("check serializes");
    Ok(Outcome::new(result, text).pass(check.holds))
}

fn decay(a: &DecayArgs) -> Result<Outcome> {
    let ix = a.index.index()?;
    let rows = decay_rows(&ix, a.a_max, a.t, a.s, &a.bs, a.lower, a.p)?;
    let csv = decay_csv(&rows);
    let mut text = String::new();
    for r in &rows {
        let _ = writeln!(
            text,
            "a = {}, t = {}, B = {}: |V_a| = {:.6}, terms = {}",
            r.a, r.t, r.b, r.v_a_abs, r.term_count
        );
    }
    Ok(Outcome::new(rows, text).csv(csv))
}

fn table(a: &TableArgs) -> Result<Outcome> {
    let t: FourierTable = match a.k {
        -2 | 0 => phi_weak(WeakKind::from_weight(a.k)?, a.cutoff)?,
        _ => phi_cusp(a.k, a.cutoff)?,
    };
    let csv = t.to_csv();
    let mut rows = Vec::new();
    let mut text = String::new();
    for (n, r) in t.support() {
        let c = coeff(&t, n, r)?;
        if n <= 3 {
            let _ = writeln!(text, "c({n}, {r}) = {c}");
        }
        rows.push(json!([n, r, c.to_string()]));
    }
    let result = json!({"k": t.weight(), "m": t.m(), "max_n": t.max_n(), "cusp": t.is_cusp(), "coefficients": rows});
    Ok(Outcome::new(result, text).csv(csv))
}

fn verify(a: &VerifyArgs) -> Result<Outcome> {
    let suites: Vec<Suite> = if a.suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![a.suite.parse()?]
    };
    let cfg = VerifyConfig {
        zero_dim_c_max: a.zero_dim_c_max,
        ratio_c_max: a.ratio_c_max,
        ..VerifyConfig::default()
    };
    let mut reports = Vec::with_capacity(suites.len());
    let mut text = String::new();
    let mut csv = String::from("criterion,suite,pass,cases,failures,worst_margin\n");
    for s in suites {
        let r = run_suite(s, &cfg)?;
        let worst = r.worst_margin.map_or("-".into(), |m| format!("{m:.3e}"));
        let _ = writeln!(
            text,
            "criterion {} {:<18} {}  cases {:>6}  failures {}  worst margin {worst}",
            r.criterion,
            r.suite,
            if r.pass { "PASS" } else { "FAIL" },
            r.cases,
            r.failures
        );
        for n in &r.notes {
            let _ = writeln!(text, "    {n}");
        }
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{}",
            r.criterion,
            r.suite,
            r.pass,
            r.cases,
            r.failures,
            r.worst_margin.map_or(String::new(), |m| format!("{m:e}"))
        );
        reports.push(r);
    }
    let all = reports.iter().all(|r| r.pass);
    let result = json!({"suites": reports, "all_pass": all});
    Ok(Outcome::new(result, text).pass(all).csv(csv))
}
