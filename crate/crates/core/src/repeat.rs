//! Finding removable blocks, exact and approximate, and the greedy
//! deduplication that turns them into an upper-bound certificate.

use std::collections::HashMap;

use crate::beta::Beta;
use crate::certificate::{CertStep, PathCertificate};
use crate::codec::{ball_rank, slice};
use crate::word::{hamming, Decomposition, DupStep, QString};

/// Which test admitted an approximate pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Admission {
    /// The two blocks are identical.
    Exact,
    /// Block phase of the block-splitting search: `d_H < β·k`.
    StrictBlock,
    /// General window scan: `d_H ≤ β·k`.
    Fallback,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RepeatHit {
    pub decomposition: Decomposition,
    pub b_len: usize,
    pub hamming: usize,
    pub admission: Admission,
}

impl RepeatHit {
    fn new(left: usize, right: usize, len: usize, hamming: usize, admission: Admission) -> Self {
        let decomposition = Decomposition {
            a_len: left,
            b_len: len,
            c_len: right - left - len,
            exact: hamming == 0,
        };
        RepeatHit { decomposition, b_len: len, hamming, admission }
    }

    pub fn left(&self) -> usize {
        self.decomposition.left()
    }

    pub fn right(&self) -> usize {
        self.decomposition.right()
    }

    /// Re-checks the hit against `x`: disjoint blocks inside the string whose
    /// Hamming distance is the recorded one.
    pub fn replays_on(&self, x: &QString) -> bool {
        let (l, r, len) = (self.left(), self.right(), self.b_len);
        len >= 1
            && self.decomposition.d_len(x.len()).is_some()
            && hamming(&x.symbols()[l..l + len], &x.symbols()[r..r + len]) == self.hamming
    }
}

const MODULUS: u64 = (1 << 61) - 1;
const BASE: u64 = 1_000_003;

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % MODULUS as u128) as u64
}

/// Polynomial hashes of every window of length `len`.
fn window_hashes(s: &[u8], len: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(s.len() + 1 - len);
    let mut top = 1u64;
    for _ in 1..len {
        top = mul_mod(top, BASE);
    }
    let mut h = 0u64;
    for (i, &c) in s.iter().enumerate() {
        if i >= len {
            let drop = mul_mod(s[i - len] as u64 + 1, top);
            h = (h + MODULUS - drop) % MODULUS;
        }
        h = (mul_mod(h, BASE) + c as u64 + 1) % MODULUS;
        if i + 1 >= len {
            out.push(h);
        }
    }
    out
}

/// Leftmost pair of disjoint equal windows of length `len`: minimal left
/// offset, then minimal right offset. Hash matches are verified.
fn first_disjoint_pair(s: &[u8], len: usize) -> Option<(usize, usize)> {
    if len == 0 || 2 * len > s.len() {
        return None;
    }
    let hashes = window_hashes(s, len);
    // hash -> first offsets of the distinct windows seen with that hash,
    // paired with whether that window already has a disjoint partner.
    let mut firsts: HashMap<u64, Vec<(usize, bool)>> = HashMap::new();
    let mut best: Option<(usize, usize)> = None;
    for (j, &h) in hashes.iter().enumerate() {
        let bucket = firsts.entry(h).or_default();
        let window = &s[j..j + len];
        match bucket.iter_mut().find(|(i, _)| &s[*i..*i + len] == window) {
            Some((i, matched)) => {
                if !*matched && j >= *i + len {
                    *matched = true;
                    if best.is_none_or(|b| (*i, j) < b) {
                        best = Some((*i, j));
                    }
                }
            }
            None => bucket.push((j, false)),
        }
    }
    best
}

/// A decomposition `x = (a b c b d)` with `|b| = k_min` (hence a repeat of
/// length at least `k_min`), if one exists.
pub fn find_exact_repeat(x: &QString, k_min: usize) -> Option<RepeatHit> {
    let k = k_min.max(1);
    first_disjoint_pair(x.symbols(), k).map(|(i, j)| RepeatHit::new(i, j, k, 0, Admission::Exact))
}

/// The longest removable exact block. Ties go to the leftmost left block,
/// then the leftmost right block.
pub fn longest_exact_repeat(x: &QString) -> Option<RepeatHit> {
    let s = x.symbols();
    // A disjoint repeat of length L contains one of every shorter length.
    let (mut lo, mut hi) = (0usize, s.len() / 2);
    let mut best = None;
    while lo < hi {
        let mid = (lo + hi).div_ceil(2);
        match first_disjoint_pair(s, mid) {
            Some(pair) => {
                lo = mid;
                best = Some(pair);
            }
            None => hi = mid - 1,
        }
    }
    if lo == 0 {
        return None;
    }
    // `best` was recorded at the last successful probe, which is `lo`.
    let (i, j) = best?;
    Some(RepeatHit::new(i, j, lo, 0, Admission::Exact))
}

/// Block-splitting search for an approximate repeat of length `k`.
///
/// `x` is cut into `⌊|x|/k⌋` consecutive blocks and the first pair `i < j`
/// with `d_H < β·k` is returned. This phase must succeed once the block
/// count exceeds the largest size of a length-`k` code with relative
/// distance `β`. Otherwise every pair of disjoint length-`k` windows is
/// scanned with the non-strict test `d_H ≤ β·k`.
pub fn find_approx_repeat(x: &QString, k: usize, beta: Beta) -> Option<RepeatHit> {
    let s = x.symbols();
    if k == 0 || 2 * k > s.len() {
        return None;
    }
    let blocks = s.len() / k;
    for i in 0..blocks {
        for j in i + 1..blocks {
            let d = hamming(&s[i * k..(i + 1) * k], &s[j * k..(j + 1) * k]);
            if beta.admits_strictly(d, k) {
                return Some(RepeatHit::new(i * k, j * k, k, d, Admission::StrictBlock));
            }
        }
    }
    for i in 0..=s.len() - 2 * k {
        for j in i + k..=s.len() - k {
            let d = hamming(&s[i..i + k], &s[j..j + k]);
            if beta.admits(d, k) {
                return Some(RepeatHit::new(i, j, k, d, Admission::Fallback));
            }
        }
    }
    None
}

/// Mismatch prefix sums: `table[δ][i]` counts `k < i` with `s[k] ≠ s[k+δ]`.
fn mismatch_prefixes(s: &[u8]) -> Vec<Vec<u32>> {
    let m = s.len();
    (0..m)
        .map(|delta| {
            let mut acc = 0u32;
            let mut row = Vec::with_capacity(m + 1 - delta);
            row.push(0);
            for k in 0..m - delta {
                if s[k] != s[k + delta] {
                    acc += 1;
                }
                row.push(acc);
            }
            row
        })
        .collect()
}

/// The widest window pair admitted by `d_H ≤ β·ℓ`; among equal widths the
/// smallest distance, then the leftmost left and right windows.
pub fn widest_approx_repeat(x: &QString, beta: Beta) -> Option<RepeatHit> {
    if beta.is_zero() {
        return longest_exact_repeat(x);
    }
    let s = x.symbols();
    let m = s.len();
    let prefixes = mismatch_prefixes(s);
    for len in (1..=m / 2).rev() {
        let radius = beta.radius(len);
        let mut best: Option<(usize, usize, usize)> = None;
        for i in 0..=m - 2 * len {
            for j in i + len..=m - len {
                let row = &prefixes[j - i];
                let d = (row[i + len] - row[i]) as usize;
                if d <= radius && best.is_none_or(|b| (d, i, j) < b) {
                    best = Some((d, i, j));
                }
            }
        }
        if let Some((d, i, j)) = best {
            let admission = if d == 0 { Admission::Exact } else { Admission::Fallback };
            return Some(RepeatHit::new(i, j, len, d, admission));
        }
    }
    None
}

/// Repeatedly removes the widest removable block until a root remains and
/// returns the path as a certificate (its length bounds `f_β(x)` from above).
pub fn greedy_dedup_path(x: &QString, beta: Beta) -> PathCertificate {
    let mut current = x.clone();
    let mut steps = Vec::new();
    while !current.is_root() {
        let hit = widest_approx_repeat(&current, beta)
            .expect("a string with a repeated symbol has a removable block");
        let (l, r, len) = (hit.left(), hit.right(), hit.b_len);
        let dup = DupStep::new(l, len, r - l - len);
        let parent = current.remove_block(r, len);
        let j = (hit.hamming > 0).then(|| {
            ball_rank(&slice(&current, l, len), beta.radius(len), &slice(&current, r, len))
                .expect("copy lies inside the ball")
        });
        steps.push(CertStep { p: dup.p, l: dup.l, t: dup.t, j });
        current = parent;
    }
    steps.reverse();
    PathCertificate { q: x.q(), root: current, target: x.clone(), beta, steps }
}
