//! q-ary strings and the duplication / deduplication edge semantics.
//!
//! A duplication with transposition `f_{p,ℓ,t}` maps `x = (a b c d)` with
//! `|a| = p`, `|b| = ℓ`, `|c| = t` to `(a b c b d)`. Deduplication is the
//! inverse and always removes the right copy of `b`. In the approximate
//! graph the right copy `b̂` may differ from `b` in at most `⌊β·ℓ⌋`
//! positions.

use std::collections::BTreeSet;
use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::beta::Beta;
use crate::error::{Error, Result};

/// Largest supported alphabet (symbols print as `0-9a-z`).
pub const MAX_Q: usize = 36;

const DIGITS: &[u8; 36] = b"0123456789abcdefghijklmnopqrstuvwxyz";

pub fn symbol_char(s: u8) -> char {
    DIGITS[s as usize] as char
}

pub fn char_symbol(c: char) -> Option<u8> {
    match c {
        '0'..='9' => Some(c as u8 - b'0'),
        'a'..='z' => Some(c as u8 - b'a' + 10),
        'A'..='Z' => Some(c as u8 - b'A' + 10),
        _ => None,
    }
}

/// A string over the alphabet `{0, …, q−1}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QString {
    q: u8,
    symbols: Vec<u8>,
}

/// One duplication event: copy the `l` symbols at offset `p` and insert the
/// copy `t` symbols to the right of the original.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DupStep {
    pub p: usize,
    pub l: usize,
    pub t: usize,
}

/// Factorization `y = (a b c b̂ d)` identified by the lengths of `a`, `b`, `c`.
/// The right block `b̂` starts at `a_len + b_len + c_len`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Decomposition {
    pub a_len: usize,
    pub b_len: usize,
    pub c_len: usize,
    pub exact: bool,
}

/// Minimal period and exponent `|v| / period` of a string.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Periodicity {
    pub period: usize,
    pub exponent: Ratio<usize>,
}

pub fn hamming(a: &[u8], b: &[u8]) -> usize {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

impl DupStep {
    pub fn new(p: usize, l: usize, t: usize) -> Self {
        DupStep { p, l, t }
    }

    /// Checks `ℓ ≥ 1`, `p ≤ m − ℓ` and `t ≤ m − ℓ − p` for a string of length `m`.
    pub fn check(&self, m: usize) -> Result<()> {
        if self.l == 0 {
            return Err(Error::Bounds("duplication length l must be at least 1".into()));
        }
        if self.l > m {
            return Err(Error::Bounds(format!("l={} exceeds string length {m}", self.l)));
        }
        if self.p > m - self.l {
            return Err(Error::Bounds(format!(
                "p={} violates p <= m - l = {}",
                self.p,
                m - self.l
            )));
        }
        if self.t > m - self.l - self.p {
            return Err(Error::Bounds(format!(
                "t={} violates t <= m - l - p = {}",
                self.t,
                m - self.l - self.p
            )));
        }
        Ok(())
    }

    /// Offset of the inserted copy in the duplicated string.
    pub fn copy_offset(&self) -> usize {
        self.p + self.l + self.t
    }
}

impl Decomposition {
    pub fn exact(a_len: usize, b_len: usize, c_len: usize) -> Self {
        Decomposition { a_len, b_len, c_len, exact: true }
    }

    pub fn approximate(a_len: usize, b_len: usize, c_len: usize) -> Self {
        Decomposition { a_len, b_len, c_len, exact: false }
    }

    pub fn left(&self) -> usize {
        self.a_len
    }

    pub fn right(&self) -> usize {
        self.a_len + self.b_len + self.c_len
    }

    /// Length of the trailing `d` for a string of length `len`, if the blocks fit.
    pub fn d_len(&self, len: usize) -> Option<usize> {
        len.checked_sub(self.a_len + 2 * self.b_len + self.c_len)
    }

    /// The duplication that rebuilds `y` from the deduplicated parent.
    pub fn step(&self) -> DupStep {
        DupStep::new(self.a_len, self.b_len, self.c_len)
    }
}

impl Periodicity {
    pub fn exponent_f64(&self) -> f64 {
        *self.exponent.numer() as f64 / *self.exponent.denom() as f64
    }
}

impl QString {
    pub fn new(symbols: Vec<u8>, q: usize) -> Result<Self> {
        if !(2..=MAX_Q).contains(&q) {
            return Err(Error::Domain(format!("alphabet size q={q} outside 2..={MAX_Q}")));
        }
        if let Some(&s) = symbols.iter().find(|&&s| s as usize >= q) {
            return Err(Error::Domain(format!("symbol {s} not in alphabet of size {q}")));
        }
        Ok(QString { q: q as u8, symbols })
    }

    pub(crate) fn from_parts(symbols: Vec<u8>, q: u8) -> Self {
        debug_assert!(symbols.iter().all(|&s| s < q));
        QString { q, symbols }
    }

    /// Parses `0-9a-z` text.
    pub fn parse(text: &str, q: usize) -> Result<Self> {
        let symbols = text
            .trim()
            .chars()
            .map(|c| char_symbol(c).ok_or_else(|| Error::Parse(format!("bad symbol {c:?} in {text:?}"))))
            .collect::<Result<Vec<_>>>()?;
        QString::new(symbols, q)
    }

    pub fn q(&self) -> usize {
        self.q as usize
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn into_symbols(self) -> Vec<u8> {
        self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// `f_{p,ℓ,t}(x) = (a b c b d)`.
    pub fn duplicate(&self, step: DupStep) -> Result<QString> {
        step.check(self.len())?;
        Ok(self.duplicate_with(step, &self.symbols[step.p..step.p + step.l]))
    }

    /// Inserts `copy` at `p + ℓ + t`; the caller has checked the bounds and
    /// that `copy` has length `ℓ`.
    pub(crate) fn duplicate_with(&self, step: DupStep, copy: &[u8]) -> QString {
        let at = step.p + step.l + step.t;
        let mut out = Vec::with_capacity(self.len() + step.l);
        out.extend_from_slice(&self.symbols[..at]);
        out.extend_from_slice(copy);
        out.extend_from_slice(&self.symbols[at..]);
        QString::from_parts(out, self.q)
    }

    /// Removes the right copy of an exact decomposition: `(a b c b d) → (a b c d)`.
    pub fn deduplicate(&self, d: &Decomposition) -> Result<QString> {
        if d.b_len == 0 {
            return Err(Error::InvalidDecomposition("b must be non-empty".into()));
        }
        if d.d_len(self.len()).is_none() {
            return Err(Error::InvalidDecomposition(format!(
                "blocks a={} b={} c={} do not fit disjointly in length {}",
                d.a_len,
                d.b_len,
                d.c_len,
                self.len()
            )));
        }
        let (l, r) = (d.left(), d.right());
        if self.symbols[l..l + d.b_len] != self.symbols[r..r + d.b_len] {
            return Err(Error::InvalidDecomposition(format!(
                "blocks at {l} and {r} of length {} differ",
                d.b_len
            )));
        }
        Ok(self.remove_block(r, d.b_len))
    }

    pub(crate) fn remove_block(&self, at: usize, len: usize) -> QString {
        let mut out = Vec::with_capacity(self.len() - len);
        out.extend_from_slice(&self.symbols[..at]);
        out.extend_from_slice(&self.symbols[at + len..]);
        QString::from_parts(out, self.q)
    }

    /// Every exact parent, i.e. every distinct result of one deduplication.
    pub fn parents(&self) -> BTreeSet<QString> {
        let mut out = BTreeSet::new();
        for_each_decomposition(&self.symbols, Beta::ZERO, |d, _| {
            out.insert(self.remove_block(d.right(), d.b_len));
        });
        out
    }

    /// Every parent in the β-approximate graph: `(a b c d)` for each
    /// factorization `(a b c b̂ d)` with `d_H(b, b̂) ≤ β·|b|`.
    pub fn approx_parents(&self, beta: Beta) -> BTreeSet<QString> {
        let mut out = BTreeSet::new();
        for_each_decomposition(&self.symbols, beta, |d, _| {
            out.insert(self.remove_block(d.right(), d.b_len));
        });
        out
    }

    /// The subsequence of first occurrences, read left to right.
    pub fn root(&self) -> QString {
        let mut seen = 0u64;
        let mut out = Vec::new();
        for &s in &self.symbols {
            if seen & (1 << s) == 0 {
                seen |= 1 << s;
                out.push(s);
            }
        }
        QString::from_parts(out, self.q)
    }

    pub fn is_root(&self) -> bool {
        let mut seen = 0u64;
        for &s in &self.symbols {
            if seen & (1 << s) != 0 {
                return false;
            }
            seen |= 1 << s;
        }
        true
    }

    /// Minimal period via the border (failure) function.
    pub fn period_exponent(&self) -> Periodicity {
        let n = self.len();
        if n == 0 {
            return Periodicity { period: 0, exponent: Ratio::from_integer(0) };
        }
        let border = longest_border(&self.symbols);
        let period = n - border;
        Periodicity { period, exponent: Ratio::new(n, period) }
    }

    /// Relabels symbols so first occurrences read `0, 1, 2, …`.
    /// Returns the canonical string and the map `old symbol → new symbol`,
    /// completed to a permutation of the whole alphabet.
    pub fn canonicalize(&self) -> (QString, Vec<u8>) {
        let mut map = vec![u8::MAX; self.q as usize];
        let mut next = 0u8;
        let symbols = self
            .symbols
            .iter()
            .map(|&s| {
                if map[s as usize] == u8::MAX {
                    map[s as usize] = next;
                    next += 1;
                }
                map[s as usize]
            })
            .collect();
        for slot in map.iter_mut().filter(|m| **m == u8::MAX) {
            *slot = next;
            next += 1;
        }
        (QString::from_parts(symbols, self.q), map)
    }

    pub fn is_canonical(&self) -> bool {
        let mut next = 0u8;
        for &s in &self.symbols {
            if s == next {
                next += 1;
            } else if s > next {
                return false;
            }
        }
        true
    }

    /// Applies an alphabet permutation given as `old → new`.
    pub fn relabel(&self, map: &[u8]) -> QString {
        QString::from_parts(self.symbols.iter().map(|&s| map[s as usize]).collect(), self.q)
    }
}

impl fmt::Display for QString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.symbols {
            write!(f, "{}", symbol_char(s))?;
        }
        Ok(())
    }
}

fn longest_border(s: &[u8]) -> usize {
    let mut fail = vec![0usize; s.len()];
    let mut k = 0;
    for i in 1..s.len() {
        while k > 0 && s[i] != s[k] {
            k = fail[k - 1];
        }
        if s[i] == s[k] {
            k += 1;
        }
        fail[i] = k;
    }
    fail.last().copied().unwrap_or(0)
}

/// Visits every factorization `(a b c b̂ d)` of `s` whose blocks satisfy
/// `d_H(b, b̂) ≤ β·|b|`, in order of increasing `ℓ`, then `p`, then `t`.
/// The callback receives the decomposition and the Hamming distance.
pub fn for_each_decomposition(s: &[u8], beta: Beta, mut visit: impl FnMut(Decomposition, usize)) {
    let m = s.len();
    for l in 1..=m / 2 {
        let radius = beta.radius(l);
        for p in 0..=m - 2 * l {
            let b = &s[p..p + l];
            for t in 0..=m - 2 * l - p {
                let r = p + l + t;
                let dist = if radius == 0 {
                    if b == &s[r..r + l] {
                        0
                    } else {
                        continue;
                    }
                } else {
                    let d = hamming(b, &s[r..r + l]);
                    if d > radius {
                        continue;
                    }
                    d
                };
                visit(
                    Decomposition { a_len: p, b_len: l, c_len: t, exact: dist == 0 },
                    dist,
                );
            }
        }
    }
}

/// Reads the line-oriented string format: an optional `q=<int>` header,
/// then one string per line. Blank lines and `#` comments are skipped.
pub fn parse_strings(text: &str, default_q: Option<usize>) -> Result<Vec<QString>> {
    let mut q = default_q;
    let mut out = Vec::new();
    for line in text.lines().map(str::trim) {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(v) = line.strip_prefix("q=") {
            q = Some(v.trim().parse().map_err(|_| Error::Parse(format!("bad header {line:?}")))?);
            continue;
        }
        let q = q.ok_or_else(|| Error::Parse("alphabet size unknown: add a q=<int> header".into()))?;
        out.push(QString::parse(line, q)?);
    }
    Ok(out)
}

pub fn format_strings(strings: &[QString]) -> String {
    let mut out = String::new();
    if let Some(first) = strings.first() {
        out.push_str(&format!("q={}\n", first.q()));
    }
    for s in strings {
        out.push_str(&s.to_string());
        out.push('\n');
    }
    out
}
