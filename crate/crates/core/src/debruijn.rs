//! De Bruijn sequences and the distinct-substring lower bound.
//!
//! Generation concatenates the Lyndon words whose length divides `k`, in
//! lexicographic order (Fredricksen–Kessler–Maiorana), which yields the
//! lexicographically least de Bruijn sequence. Sequences are cyclic; the
//! linear reading used for distance computations appends the first `k − 1`
//! symbols so that all `q^k` windows appear as ordinary substrings.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::word::QString;

/// Largest sequence length `debruijn` will materialize.
pub const MAX_SEQUENCE_LEN: usize = 1 << 26;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubstringCount {
    pub k: usize,
    /// Distinct length-`k` substrings of the string.
    pub count: usize,
    /// Distinct length-`k` substrings of its root.
    pub root_count: usize,
}

fn checked_pow(q: usize, k: usize) -> Option<usize> {
    q.checked_pow(u32::try_from(k).ok()?)
}

/// The cyclic de Bruijn sequence of order `k` over `q` symbols.
pub fn debruijn(q: usize, k: usize) -> Result<QString> {
    if q < 2 || k == 0 {
        return Err(Error::Domain(format!("need q >= 2 and k >= 1, got q={q}, k={k}")));
    }
    let len = checked_pow(q, k)
        .filter(|&n| n <= MAX_SEQUENCE_LEN)
        .ok_or_else(|| Error::Resource(format!("q^k = {q}^{k} exceeds {MAX_SEQUENCE_LEN} symbols")))?;
    // Iterative FKM: walk Lyndon prefixes in lexicographic order.
    let mut out = Vec::with_capacity(len);
    let mut a = vec![0u8; k + 1];
    let top = (q - 1) as u8;
    // a = 0^k is the first prenecklace; its period-1 prefix is the word "0".
    out.push(0);
    let mut i = k;
    while i > 0 {
        a[i] += 1;
        for j in 1..=k - i {
            a[i + j] = a[j];
        }
        if k % i == 0 {
            out.extend_from_slice(&a[1..=i]);
        }
        i = k;
        while i > 0 && a[i] == top {
            i -= 1;
        }
    }
    debug_assert_eq!(out.len(), len);
    QString::new(out, q)
}

/// Appends the first `k − 1` symbols, so the cyclic windows become linear.
pub fn linearize(cyclic: &QString, k: usize) -> QString {
    let mut symbols = cyclic.symbols().to_vec();
    let wrap = (k.saturating_sub(1)).min(cyclic.len());
    symbols.extend_from_within(..wrap);
    QString::new(symbols, cyclic.q()).expect("same alphabet")
}

/// True iff `|y| = q^k` and the cyclic `k`-grams of `y` are all distinct
/// (hence exactly the whole of `A_q^k`).
pub fn verify_debruijn(y: &QString, k: usize) -> bool {
    if k == 0 || checked_pow(y.q(), k) != Some(y.len()) {
        return false;
    }
    let lin = linearize(y, k);
    let mut seen = HashSet::with_capacity(y.len());
    lin.symbols().windows(k).all(|w| seen.insert(w))
}

/// Length-`k` windows packed base-2^bits, when `k` symbols fit in 64 bits.
fn packed_windows(s: &[u8], k: usize, q: usize) -> Option<Vec<u64>> {
    let bits = usize::BITS - (q - 1).leading_zeros();
    if k * bits as usize > 64 || s.len() < k {
        return None;
    }
    let mask = if k * bits as usize == 64 { u64::MAX } else { (1u64 << (k * bits as usize)) - 1 };
    let mut acc = 0u64;
    let mut out = Vec::with_capacity(s.len() + 1 - k);
    for (i, &c) in s.iter().enumerate() {
        acc = ((acc << bits) | c as u64) & mask;
        if i + 1 >= k {
            out.push(acc);
        }
    }
    Some(out)
}

/// `N(s, k)`: distinct substrings of length `k`; zero when `k > |s|`.
pub fn distinct_kgrams(s: &[u8], k: usize, q: usize) -> usize {
    if k == 0 || k > s.len() {
        return 0;
    }
    match packed_windows(s, k, q) {
        Some(mut codes) => {
            codes.sort_unstable();
            codes.dedup();
            codes.len()
        }
        None => {
            let mut starts: Vec<usize> = (0..=s.len() - k).collect();
            starts.sort_unstable_by(|&a, &b| s[a..a + k].cmp(&s[b..b + k]));
            starts.dedup_by(|a, b| s[*a..*a + k] == s[*b..*b + k]);
            starts.len()
        }
    }
}

pub fn count_distinct_substrings(y: &QString, k: usize) -> Result<SubstringCount> {
    if k == 0 {
        return Err(Error::Domain("substring length k must be at least 1".into()));
    }
    Ok(SubstringCount {
        k,
        count: distinct_kgrams(y.symbols(), k, y.q()),
        root_count: distinct_kgrams(y.root().symbols(), k, y.q()),
    })
}

/// `⌈(N(y,k) − N(root(y),k)) / (2(k−1))⌉`, a lower bound on the exact
/// distance `f(y)`.
pub fn substring_lower_bound(y: &QString, k: usize) -> Result<usize> {
    if k < 2 {
        return Err(Error::Domain(format!("substring bound needs k >= 2, got {k}")));
    }
    let c = count_distinct_substrings(y, k)?;
    Ok((c.count - c.root_count).div_ceil(2 * (k - 1)))
}

/// `⌈(q^k − k + 1) / (2(k−1))⌉` for a linearized de Bruijn sequence of
/// order `k ≥ q + 1`.
pub fn debruijn_bound(q: usize, k: usize) -> Result<usize> {
    if k < q + 1 {
        return Err(Error::Domain(format!(
            "de Bruijn bound requires order k >= q + 1 = {}, got k={k}",
            q + 1
        )));
    }
    let n = checked_pow(q, k).ok_or_else(|| Error::Overflow(format!("{q}^{k}")))?;
    Ok((n - k + 1).div_ceil(2 * (k - 1)))
}
