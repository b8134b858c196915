//! Exhaustive dynamic program for `f_β(w)` over every string up to a length.
//!
//! Strings are processed in increasing length; every parent is strictly
//! shorter, so `f(w) = 0` for roots and otherwise `1 + min f(parent)` reads
//! only finished levels. Only canonical strings (first occurrences read
//! `0, 1, 2, …`) are stored: `f` is invariant under alphabet permutations,
//! so a level's maximum over canonical strings is the maximum over all
//! strings.
//!
//! Memory model: for `q = 2` a level of length `m` is a dense byte array of
//! `2^(m−1)` entries indexed by the packed string (first symbol is 0, bit
//! `m−1−i` holds symbol `i`), so lengths up to 24 cost at most 16 MiB per
//! level. Larger alphabets keep one hash map per level keyed by the packed
//! canonical string. The state budget counts stored strings; exceeding it
//! fails before the offending level is allocated.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::beta::Beta;
use crate::error::{Error, Result};
use crate::word::{for_each_decomposition, QString};

pub const DEFAULT_TABLE_BUDGET: u64 = 1 << 27;
/// Binary strings are packed into a `u64`, so the dense backend stops here.
pub const MAX_BINARY_LEN: usize = 40;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableEntry {
    pub n: usize,
    pub fmax: u32,
    #[serde(serialize_with = "ser_display")]
    pub witness: QString,
}

fn ser_display<S: serde::Serializer>(v: &QString, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// `f_β(n)` for `n = 1..=n_max`, each with the lexicographically least
/// canonical string of length at most `n` attaining it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DistanceTable {
    pub q: usize,
    pub beta: Beta,
    pub entries: Vec<TableEntry>,
}

impl DistanceTable {
    pub fn get(&self, n: usize) -> Option<&TableEntry> {
        self.entries.get(n.checked_sub(1)?)
    }

    pub fn values(&self) -> Vec<u32> {
        self.entries.iter().map(|e| e.fmax).collect()
    }

    /// `n<TAB>f(n)<TAB>witness` lines.
    pub fn to_tsv(&self) -> String {
        self.entries
            .iter()
            .map(|e| format!("{}\t{}\t{}\n", e.n, e.fmax, e.witness))
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.entries).expect("table serializes")
    }

    pub fn is_monotone(&self) -> bool {
        self.entries.windows(2).all(|w| w[0].fmax <= w[1].fmax)
    }
}

/// Per-level maximum and its lexicographically least witness.
#[derive(Debug, Clone)]
struct LevelSummary {
    fmax: u32,
    witness: Vec<u8>,
}

enum Levels {
    /// `levels[m]` holds `2^(m−1)` distances (index 0 unused).
    Binary(Vec<Vec<u8>>),
    /// Canonical strings of length `m`, packed, to their distance.
    Hashed { width: u32, levels: Vec<HashMap<u128, u8>> },
}

/// The full table of exact distances for all strings up to `completed()`.
pub struct DistanceDp {
    q: usize,
    beta: Beta,
    levels: Levels,
    summaries: Vec<LevelSummary>,
}

fn symbol_width(q: usize) -> u32 {
    usize::BITS - (q - 1).leading_zeros()
}

fn pack(symbols: &[u8], width: u32) -> u128 {
    symbols.iter().fold(0u128, |acc, &s| (acc << width) | s as u128)
}

/// Number of canonical strings of length `m` over at most `q` symbols:
/// `Σ_{j ≤ q} S(m, j)` with `S` the Stirling numbers of the second kind.
pub fn canonical_count(q: usize, m: usize) -> u64 {
    let mut row = vec![0u64; q + 1];
    row[0] = 1;
    for _ in 0..m {
        let mut next = vec![0u64; q + 1];
        for j in 1..=q {
            next[j] = row[j].saturating_mul(j as u64).saturating_add(row[j - 1]);
        }
        row = next;
    }
    row[1..].iter().fold(0u64, |a, &b| a.saturating_add(b))
}

/// Canonical strings of length `m` in lexicographic order.
fn canonical_strings(q: usize, m: usize) -> Vec<Vec<u8>> {
    fn rec(q: usize, m: usize, cur: &mut Vec<u8>, max: u8, out: &mut Vec<Vec<u8>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        let limit = (max as usize + 1).min(q - 1) as u8;
        for s in 0..=limit {
            cur.push(s);
            rec(q, m, cur, max.max(s), out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if m > 0 {
        let mut cur = vec![0u8];
        rec(q, m, &mut cur, 0, &mut out);
    }
    out
}

fn mask(bits: usize) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

/// `f` of the binary string `v` of length `m` (first symbol 0) from the
/// finished shorter levels.
fn binary_distance(v: u64, m: usize, beta: Beta, levels: &[Vec<u8>]) -> u8 {
    if m == 1 || (m == 2 && v == 1) {
        return 0;
    }
    let mut best = u8::MAX;
    for l in 1..=m / 2 {
        let radius = beta.radius(l) as u32;
        let block_mask = mask(l);
        let parent_level = &levels[m - l];
        for p in 0..=m - 2 * l {
            let b = (v >> (m - p - l)) & block_mask;
            for t in 0..=m - 2 * l - p {
                let s = p + l + t;
                let shift = m - s - l;
                let copy = (v >> shift) & block_mask;
                if (b ^ copy).count_ones() > radius {
                    continue;
                }
                let parent = ((v >> (m - s)) << shift) | (v & mask(shift));
                let f = parent_level[parent as usize];
                if f < best {
                    best = f;
                    if best == 0 {
                        return 1;
                    }
                }
            }
        }
    }
    best + 1
}

impl DistanceDp {
    pub fn new(q: usize, beta: Beta) -> Result<Self> {
        if q < 2 || q > crate::word::MAX_Q {
            return Err(Error::Domain(format!("alphabet size q={q} unsupported")));
        }
        let levels = if q == 2 {
            Levels::Binary(vec![Vec::new()])
        } else {
            Levels::Hashed { width: symbol_width(q), levels: vec![HashMap::new()] }
        };
        Ok(DistanceDp { q, beta, levels, summaries: Vec::new() })
    }

    /// Builds the table for all lengths `1..=n_max` under `budget` stored strings.
    pub fn compute(q: usize, n_max: usize, beta: Beta, budget: u64) -> Result<Self> {
        let mut dp = DistanceDp::new(q, beta)?;
        dp.extend_to(n_max, budget)?;
        Ok(dp)
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn beta(&self) -> Beta {
        self.beta
    }

    /// Largest length whose level is complete.
    pub fn completed(&self) -> usize {
        self.summaries.len()
    }

    fn stored(&self) -> u64 {
        (1..=self.completed()).map(|m| self.level_size(m)).sum()
    }

    fn level_size(&self, m: usize) -> u64 {
        match self.levels {
            Levels::Binary(_) => 1u64 << (m - 1),
            Levels::Hashed { .. } => canonical_count(self.q, m),
        }
    }

    /// Adds levels up to `n_max`. On budget failure the finished levels stay
    /// usable and the error names the largest completed length.
    pub fn extend_to(&mut self, n_max: usize, budget: u64) -> Result<()> {
        while self.completed() < n_max {
            let m = self.completed() + 1;
            let size = self.level_size(m);
            let limit_hit = match self.levels {
                Levels::Binary(_) => m > MAX_BINARY_LEN,
                Levels::Hashed { width, .. } => m * width as usize > 128,
            };
            if limit_hit || self.stored().saturating_add(size) > budget {
                return Err(Error::Resource(format!(
                    "level n={m} needs {size} more states (budget {budget}); largest completed n={}",
                    m - 1
                )));
            }
            let summary = match &mut self.levels {
                Levels::Binary(levels) => {
                    let level: Vec<u8> = {
                        let done: &[Vec<u8>] = levels;
                        let beta = self.beta;
                        (0..size)
                            .into_par_iter()
                            .map(|v| binary_distance(v, m, beta, done))
                            .collect()
                    };
                    let fmax = *level.iter().max().expect("level is non-empty");
                    let first = level.iter().position(|&f| f == fmax).expect("max exists") as u64;
                    let witness = (0..m).map(|i| ((first >> (m - 1 - i)) & 1) as u8).collect();
                    levels.push(level);
                    LevelSummary { fmax: fmax as u32, witness }
                }
                Levels::Hashed { width, levels } => {
                    let width = *width;
                    let strings = canonical_strings(self.q, m);
                    let beta = self.beta;
                    let done: &[HashMap<u128, u8>] = levels;
                    let values: Vec<u8> = strings
                        .par_iter()
                        .map(|w| hashed_distance(w, beta, width, done))
                        .collect();
                    let fmax = *values.iter().max().expect("level is non-empty");
                    let first = values.iter().position(|&f| f == fmax).expect("max exists");
                    let witness = strings[first].clone();
                    let level = strings.iter().map(|w| pack(w, width)).zip(values).collect();
                    levels.push(level);
                    LevelSummary { fmax: fmax as u32, witness }
                }
            };
            self.summaries.push(summary);
        }
        Ok(())
    }

    /// Exact `f_β(v)` for any string (canonicalized first), if its length is covered.
    pub fn get(&self, v: &QString) -> Option<u32> {
        if v.is_empty() || v.len() > self.completed() || v.q() != self.q {
            return None;
        }
        let (canon, _) = v.canonicalize();
        let m = canon.len();
        match &self.levels {
            Levels::Binary(levels) => {
                let packed = pack(canon.symbols(), 1) as usize;
                Some(levels[m][packed] as u32)
            }
            Levels::Hashed { width, levels } => {
                levels[m].get(&pack(canon.symbols(), *width)).map(|&f| f as u32)
            }
        }
    }

    /// Maximum over each single length `m` (not cumulative).
    pub fn level_max(&self, m: usize) -> Option<u32> {
        self.summaries.get(m.checked_sub(1)?).map(|s| s.fmax)
    }

    pub fn table(&self) -> DistanceTable {
        let mut entries: Vec<TableEntry> = Vec::with_capacity(self.completed());
        let mut best: Option<(u32, &Vec<u8>)> = None;
        for (i, s) in self.summaries.iter().enumerate() {
            best = match best {
                Some((f, w)) if f > s.fmax || (f == s.fmax && w <= &s.witness) => Some((f, w)),
                _ => Some((s.fmax, &s.witness)),
            };
            let (fmax, witness) = best.expect("set above");
            entries.push(TableEntry {
                n: i + 1,
                fmax,
                witness: QString::new(witness.clone(), self.q).expect("in alphabet"),
            });
        }
        DistanceTable { q: self.q, beta: self.beta, entries }
    }
}

fn hashed_distance(w: &[u8], beta: Beta, width: u32, levels: &[HashMap<u128, u8>]) -> u8 {
    if crate::word::QString::from_parts(w.to_vec(), u8::MAX).is_root() {
        return 0;
    }
    let mut best = u8::MAX;
    for_each_decomposition(w, beta, |d, dist| {
        if best == 0 {
            return;
        }
        let r = d.right();
        let mut parent = Vec::with_capacity(w.len() - d.b_len);
        parent.extend_from_slice(&w[..r]);
        parent.extend_from_slice(&w[r + d.b_len..]);
        if dist > 0 {
            canonicalize_in_place(&mut parent);
        }
        let f = levels[parent.len()][&pack(&parent, width)];
        best = best.min(f);
    });
    best + 1
}

fn canonicalize_in_place(s: &mut [u8]) {
    let mut map = [u8::MAX; crate::word::MAX_Q];
    let mut next = 0u8;
    for c in s.iter_mut() {
        if map[*c as usize] == u8::MAX {
            map[*c as usize] = next;
            next += 1;
        }
        *c = map[*c as usize];
    }
}

/// `f_β(n)` for `n = 1..=n_max`.
pub fn max_distance_table(q: usize, n_max: usize, beta: Beta) -> Result<DistanceTable> {
    Ok(DistanceDp::compute(q, n_max, beta, DEFAULT_TABLE_BUDGET)?.table())
}
