//! Bound formulas for `f(n)` and `f_β(n)`.
//!
//! Threshold tests against `(q−1)/q` are done on exact rationals. Values
//! that depend on logarithms are `f64`; integer-valued lower bounds are
//! computed so that floating-point error can only make them smaller.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::beta::Beta;
use crate::error::{Error, Result};

/// q-ary entropy `H_q(x) = −x log_q x − (1−x) log_q(1−x) + x log_q(q−1)`,
/// with `H_q(0) = 0` and `H_q(1) = log_q(q−1)`.
pub fn entropy_q(q: usize, x: f64) -> Result<f64> {
    if q < 2 {
        return Err(Error::Domain(format!("alphabet size q={q} < 2")));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("entropy argument {x} outside [0, 1]")));
    }
    let ln_q = (q as f64).ln();
    let xlnx = |v: f64| if v == 0.0 { 0.0 } else { v * v.ln() };
    Ok((-xlnx(x) - xlnx(1.0 - x) + x * ((q - 1) as f64).ln()) / ln_q)
}

fn below_threshold(q: usize, beta: Beta, what: &str) -> Result<()> {
    if beta.cmp_threshold(q) != Ordering::Less {
        return Err(Error::Domain(format!(
            "{what} requires beta < (q-1)/q = {}/{q}, got {beta}",
            q - 1
        )));
    }
    Ok(())
}

/// Elias–Bassalygo upper bound on the asymptotic rate `R(q, β)`:
/// `1 − H_q(θ(1 − sqrt(1 − β/θ)))` with `θ = (q−1)/q`.
pub fn elias_bassalygo(q: usize, beta: Beta) -> Result<f64> {
    below_threshold(q, beta, "the Elias-Bassalygo bound")?;
    let theta = (q - 1) as f64 / q as f64;
    let inner = theta * (1.0 - (1.0 - beta.to_f64() / theta).sqrt());
    Ok(1.0 - entropy_q(q, inner)?)
}

/// Plotkin-regime constants: `c = ⌈βq / (βq − (q−1))⌉` and `q′ = (c+1)/c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PlotkinConstants {
    pub c: u64,
    #[serde(serialize_with = "ser_ratio")]
    pub q_prime: Ratio<u64>,
}

fn ser_ratio<S: serde::Serializer>(r: &Ratio<u64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(&format_args!("{}/{}", r.numer(), r.denom()))
}

impl PlotkinConstants {
    pub fn q_prime_f64(&self) -> f64 {
        *self.q_prime.numer() as f64 / *self.q_prime.denom() as f64
    }
}

impl fmt::Display for PlotkinConstants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c={} q'={}/{}", self.c, self.q_prime.numer(), self.q_prime.denom())
    }
}

pub fn plotkin_c(q: usize, beta: Beta) -> Result<PlotkinConstants> {
    if beta.cmp_threshold(q) != Ordering::Greater {
        return Err(Error::Domain(format!(
            "Plotkin constants require beta > (q-1)/q = {}/{q}, got {beta}",
            q - 1
        )));
    }
    // βq / (βq − (q−1)) with β = a/b is aq / (aq − (q−1)b).
    let (a, b, q) = (beta.numer(), beta.denom(), q as u64);
    let c = (a * q).div_ceil(a * q - (q - 1) * b);
    Ok(PlotkinConstants { c, q_prime: Ratio::new(c + 1, c) })
}

/// Plotkin-type size bound `βq / (βq − (q−1))` as an exact rational.
pub fn plotkin_size_bound(q: usize, beta: Beta) -> Result<Ratio<u64>> {
    plotkin_c(q, beta)?;
    let (a, b, q) = (beta.numer(), beta.denom(), q as u64);
    Ok(Ratio::new(a * q, a * q - (q - 1) * b))
}

/// Finite-n upper bound for exact duplication,
/// `3q^{k′} + n(q−1) / (q (log_q n − 3)(1 − (k′−3)/((k′−4)q)))`,
/// valid for `k′ ≥ 14` and `n ≥ 3q^{k′}`.
pub fn exact_upper_bound_f(q: usize, n: u64, k_prime: u32) -> Result<f64> {
    if q < 2 {
        return Err(Error::Domain(format!("alphabet size q={q} < 2")));
    }
    if k_prime < 14 {
        return Err(Error::Domain(format!("k' = {k_prime} violates k' >= 14")));
    }
    let threshold = (q as u128)
        .checked_pow(k_prime)
        .and_then(|p| p.checked_mul(3))
        .ok_or_else(|| Error::Overflow(format!("3*{q}^{k_prime}")))?;
    if (n as u128) < threshold {
        return Err(Error::Domain(format!("n = {n} violates n >= 3q^k' = {threshold}")));
    }
    // (k′−3)/((k′−4)q) < 1 holds for every q ≥ 2 once k′ ≥ 14.
    let ratio = (k_prime - 3) as f64 / ((k_prime - 4) as f64 * q as f64);
    if ratio >= 1.0 {
        return Err(Error::Domain(format!("(k'-3)/((k'-4)q) = {ratio} violates < 1")));
    }
    let qf = q as f64;
    let log_n = (n as f64).ln() / qf.ln();
    Ok(threshold as f64 + n as f64 * (qf - 1.0) / (qf * (log_n - 3.0) * (1.0 - ratio)))
}

/// An upper-bound value together with whether it is a certified finite-n
/// statement or only the leading term of an asymptotic one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UpperEstimate {
    pub value: f64,
    pub certified: bool,
}

/// `f_β(n)` upper bound. Below `(q−1)/q` this is the leading term
/// `n·r̄/log_q n` with `r̄` the Elias–Bassalygo rate (asymptotic only);
/// above it, the certified `(c+1) + log_{q′} n`.
pub fn approx_upper_bound_f(q: usize, n: u64, beta: Beta) -> Result<UpperEstimate> {
    if n < 2 {
        return Err(Error::Domain(format!("n = {n} must be at least 2")));
    }
    match beta.cmp_threshold(q) {
        Ordering::Equal => Err(Error::Domain(format!(
            "beta = (q-1)/q = {}/{q} is the open threshold case",
            q - 1
        ))),
        Ordering::Less => {
            let r = elias_bassalygo(q, beta)?;
            let log_n = (n as f64).ln() / (q as f64).ln();
            Ok(UpperEstimate { value: n as f64 * r / log_n, certified: false })
        }
        Ordering::Greater => {
            let pc = plotkin_c(q, beta)?;
            let value = (pc.c + 1) as f64 + (n as f64).ln() / pc.q_prime_f64().ln();
            Ok(UpperEstimate { value, certified: true })
        }
    }
}

/// `⌈log₂(n/q)⌉` clamped at zero: each duplication at most doubles the
/// length and roots have length at most `q`.
pub fn trivial_lower_bound_f(q: usize, n: u64) -> u64 {
    let mut f = 0;
    while (q as u128) << f < n as u128 {
        f += 1;
    }
    f
}

fn factorial(q: usize) -> BigUint {
    (1..=q as u64).fold(BigUint::one(), |acc, i| acc * i)
}

/// `⌈q^{H_q(β)·n}⌉`, rounded up so that counts built on it stay upper bounds.
fn ball_volume_ceiling(q: usize, n: u64, beta: Beta) -> Result<BigUint> {
    if beta.is_zero() {
        return Ok(BigUint::one());
    }
    let exponent = entropy_q(q, beta.to_f64())? * n as f64;
    // Guard against the last ulp of the exponent.
    let exponent = exponent * (1.0 + 1e-12) + 1e-9;
    let whole = exponent.floor();
    let frac = exponent - whole;
    let scale = 1u64 << 52;
    let mantissa = ((q as f64).powf(frac) * scale as f64).ceil() as u64 + 1;
    let value = BigUint::from(q).pow(whole as u32) * mantissa;
    Ok(Integer::div_ceil(&value, &BigUint::from(scale)))
}

fn binomial(n: u64, k: u64) -> BigUint {
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// The number of path descriptions of length at most `f`:
/// `q!·q·Σ_{i=1..f} n^{2i}·C(n,i)·q^{H_q(β)n}`.
pub fn path_description_count(q: usize, n: u64, beta: Beta, f: u64) -> Result<BigUint> {
    below_threshold(q, beta, "the description count")?;
    if f == 0 {
        return Ok(BigUint::zero());
    }
    let ball = ball_volume_ceiling(q, n, beta)?;
    let n_sq = BigUint::from(n) * n;
    let mut power = BigUint::one();
    let mut sum = BigUint::zero();
    for i in 1..=f {
        power *= &n_sq;
        sum += &power * binomial(n, i);
    }
    Ok(factorial(q) * q * sum * ball)
}

/// Least `f` with `q!·q·f·n^{3f}·q^{H_q(β)n} ≥ q^n`; zero when `n ≤ q`.
pub fn counting_lower_bound_f(q: usize, n: u64, beta: Beta) -> Result<u64> {
    below_threshold(q, beta, "the counting bound")?;
    if q < 2 {
        return Err(Error::Domain(format!("alphabet size q={q} < 2")));
    }
    if n <= q as u64 {
        return Ok(0);
    }
    if beta.is_zero() {
        let target = BigUint::from(q).pow(n as u32);
        let base = factorial(q) * q;
        let n3 = BigUint::from(n).pow(3);
        let mut power = n3.clone();
        for f in 1u64.. {
            if &base * f * &power >= target {
                return Ok(f);
            }
            power *= &n3;
        }
        unreachable!()
    }
    // Log domain in base q. The left side is overestimated by a margin far
    // above f64 error, so the returned f never exceeds the exact one.
    let ln_q = (q as f64).ln();
    let log_q = |v: f64| v.ln() / ln_q;
    let h = entropy_q(q, beta.to_f64())?;
    let fixed = log_q(factorial(q).to_f64().unwrap_or(f64::INFINITY) * q as f64) + h * n as f64;
    let margin = 1e-9 * (n as f64).max(1.0);
    for f in 1u64.. {
        let lhs = fixed + log_q(f as f64) + 3.0 * f as f64 * log_q(n as f64) + margin;
        if lhs >= n as f64 {
            return Ok(f);
        }
    }
    unreachable!()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Lower,
    Upper,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum BoundValue {
    Int(u64),
    Real(f64),
}

impl BoundValue {
    pub fn as_f64(self) -> f64 {
        match self {
            BoundValue::Int(v) => v as f64,
            BoundValue::Real(v) => v,
        }
    }
}

impl fmt::Display for BoundValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundValue::Int(v) => write!(f, "{v}"),
            BoundValue::Real(v) => write!(f, "{v:.6}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundEntry {
    pub name: String,
    pub kind: BoundKind,
    pub value: BoundValue,
    /// False for leading-order asymptotic values that are not bounds at finite n.
    pub certified: bool,
    pub assumptions: String,
}

/// Named bound values for one `(q, n, β)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub q: usize,
    pub n: u64,
    pub beta: Beta,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plotkin: Option<PlotkinConstants>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eb_rate: Option<f64>,
    pub entries: Vec<BoundEntry>,
}

impl BoundReport {
    pub fn new(q: usize, n: u64, beta: Beta) -> Self {
        BoundReport { q, n, beta, plotkin: None, eb_rate: None, entries: Vec::new() }
    }

    pub fn push(
        &mut self,
        name: &str,
        kind: BoundKind,
        value: BoundValue,
        certified: bool,
        assumptions: &str,
    ) {
        self.entries.push(BoundEntry {
            name: name.into(),
            kind,
            value,
            certified,
            assumptions: assumptions.into(),
        });
    }

    pub fn best_lower(&self) -> Option<f64> {
        self.entries
            .iter()
            .filter(|e| e.kind == BoundKind::Lower && e.certified)
            .map(|e| e.value.as_f64())
            .reduce(f64::max)
    }

    pub fn best_upper(&self) -> Option<f64> {
        self.entries
            .iter()
            .filter(|e| e.kind == BoundKind::Upper && e.certified)
            .map(|e| e.value.as_f64())
            .reduce(f64::min)
    }

    /// Every certified lower value is at most every certified upper value.
    pub fn is_consistent(&self) -> bool {
        match (self.best_lower(), self.best_upper()) {
            (Some(lo), Some(hi)) => lo <= hi,
            _ => true,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("q={} n={} beta={}\n", self.q, self.n, self.beta);
        if let Some(pc) = self.plotkin {
            out.push_str(&format!("{pc}\n"));
        }
        if let Some(r) = self.eb_rate {
            out.push_str(&format!("elias-bassalygo rate={r:.6}\n"));
        }
        let width = self.entries.iter().map(|e| e.name.len()).max().unwrap_or(0);
        for e in &self.entries {
            let kind = match e.kind {
                BoundKind::Lower => "lower",
                BoundKind::Upper => "upper",
            };
            let flag = if e.certified { "certified" } else { "asymptotic, not certified at finite n" };
            out.push_str(&format!(
                "{:<width$}  {kind}  {:>14}  {flag}; {}\n",
                e.name, e.value.to_string(), e.assumptions
            ));
        }
        out
    }
}

/// Every bound formula that applies to `f_β(n)` for the given parameters.
pub fn bound_report(q: usize, n: u64, beta: Beta) -> Result<BoundReport> {
    if q < 2 || n == 0 {
        return Err(Error::Domain(format!("need q >= 2 and n >= 1, got q={q}, n={n}")));
    }
    let mut report = BoundReport::new(q, n, beta);
    report.push(
        "trivial",
        BoundKind::Lower,
        BoundValue::Int(trivial_lower_bound_f(q, n)),
        true,
        "each duplication at most doubles the length",
    );
    let threshold = beta.cmp_threshold(q);
    if threshold == Ordering::Less {
        report.push(
            "counting",
            BoundKind::Lower,
            BoundValue::Int(counting_lower_bound_f(q, n, beta)?),
            true,
            "counts quadruple descriptions against q^n strings",
        );
        report.eb_rate = Some(elias_bassalygo(q, beta)?);
    }
    if beta.is_zero() {
        if let Some((k, value)) = debruijn_lower_for_length(q, n) {
            report.push(
                "de-bruijn",
                BoundKind::Lower,
                BoundValue::Int(value),
                true,
                &format!("linearized de Bruijn sequence of order {k} fits in length n"),
            );
        }
        if let Some((k, value)) = best_exact_upper(q, n) {
            report.push(
                "greedy-closed-form",
                BoundKind::Upper,
                BoundValue::Real(value),
                true,
                &format!("k'={k}, n >= 3q^k'"),
            );
        }
    }
    match threshold {
        Ordering::Equal => {}
        _ if n >= 2 => {
            let est = approx_upper_bound_f(q, n, beta)?;
            let (name, note) = if est.certified {
                ("plotkin", "beta > (q-1)/q; (c+1) + log_q' n")
            } else {
                ("elias-bassalygo", "leading term n*r/log_q n with r the EB rate")
            };
            report.push(name, BoundKind::Upper, BoundValue::Real(est.value), est.certified, note);
        }
        _ => {}
    }
    if threshold == Ordering::Greater {
        report.plotkin = Some(plotkin_c(q, beta)?);
    }
    Ok(report)
}

/// Largest de Bruijn order `k ≥ q+1` whose linearization (length
/// `q^k + k − 1`) fits in `n`, with its corollary value.
fn debruijn_lower_for_length(q: usize, n: u64) -> Option<(usize, u64)> {
    let mut found = None;
    for k in q + 1.. {
        let len = (q as u64).checked_pow(k as u32)?.checked_add(k as u64 - 1)?;
        if len > n {
            break;
        }
        let value = crate::debruijn::debruijn_bound(q, k).ok()? as u64;
        found = Some((k, value));
    }
    found
}

/// The smallest closed-form upper bound over admissible `k′`.
fn best_exact_upper(q: usize, n: u64) -> Option<(u32, f64)> {
    (14u32..64)
        .map_while(|k| exact_upper_bound_f(q, n, k).ok().map(|v| (k, v)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
}
