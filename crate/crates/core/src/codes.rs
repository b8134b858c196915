//! Exact maximum size `M(q, k, β)` of a q-ary code of length `k` whose
//! words are pairwise at Hamming distance at least `β·k`.
//!
//! The search is a branch-and-bound maximum clique on the "far enough"
//! graph. Two isometries of Hamming space are used for pruning, both
//! conservative for every `q`: independent symbol permutations in each
//! coordinate, and coordinate permutations. With them the first codeword is
//! fixed to `0^k` and the second to `1^w 0^(k−w)` for some weight `w`.

use crate::beta::Beta;
use crate::error::{Error, Result};
use crate::word::QString;

/// Largest `q^k` the search accepts.
pub const MAX_SPACE: usize = 1 << 20;
pub const DEFAULT_NODE_BUDGET: u64 = 50_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeSearchResult {
    pub q: usize,
    pub k: usize,
    pub beta: Beta,
    /// Required pairwise distance: `⌈β·k⌉`, or `⌊β·k⌋ + 1` for the strict variant.
    pub min_distance: usize,
    pub size: usize,
    pub witness: Vec<QString>,
    pub nodes: u64,
}

fn decode_word(mut code: usize, q: usize, k: usize) -> Vec<u8> {
    let mut out = vec![0u8; k];
    for slot in out.iter_mut().rev() {
        *slot = (code % q) as u8;
        code /= q;
    }
    out
}

fn distance(a: &[u8], b: &[u8]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// Fixed-width bitset over candidate indices.
#[derive(Clone)]
struct Bits(Vec<u64>);

impl Bits {
    fn empty(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn clear(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    fn first(&self) -> Option<usize> {
        let w = self.0.iter().position(|&w| w != 0)?;
        Some(w * 64 + self.0[w].trailing_zeros() as usize)
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &bits)| {
            let mut rest = bits;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(w * 64 + b)
            })
        })
    }
}

/// Maximum clique by branch and bound with a greedy-colouring bound.
struct CliqueSearch<'a> {
    adj: &'a [Bits],
    /// Size to beat; `best` is only filled by a strictly larger clique.
    best_len: usize,
    best: Vec<usize>,
    current: Vec<usize>,
    nodes: u64,
    budget: u64,
    exhausted: bool,
}

impl CliqueSearch<'_> {
    /// Colour classes in order; returns vertices with their colour bound.
    fn colour(&self, cand: &Bits) -> Vec<(usize, usize)> {
        let mut uncoloured = cand.clone();
        let mut out = Vec::with_capacity(cand.count());
        let mut colour = 0;
        while !uncoloured.is_empty() {
            colour += 1;
            let mut avail = uncoloured.clone();
            while let Some(v) = avail.first() {
                avail.clear(v);
                uncoloured.clear(v);
                for w in self.adj[v].iter() {
                    avail.clear(w);
                }
                out.push((v, colour));
            }
        }
        out
    }

    fn expand(&mut self, cand: Bits) {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
            return;
        }
        let order = self.colour(&cand);
        let mut cand = cand;
        for &(v, bound) in order.iter().rev() {
            if self.current.len() + bound <= self.best_len || self.exhausted {
                return;
            }
            self.current.push(v);
            let next = cand.and(&self.adj[v]);
            if next.is_empty() {
                if self.current.len() > self.best_len {
                    self.best_len = self.current.len();
                    self.best = self.current.clone();
                }
            } else {
                self.expand(next);
            }
            self.current.pop();
            cand.clear(v);
        }
    }
}

/// Exhaustive `M(q, k, β)` with a witness code, under a node budget.
pub fn exact_m(q: usize, k: usize, beta: Beta) -> Result<CodeSearchResult> {
    exact_m_with_budget(q, k, beta, DEFAULT_NODE_BUDGET)
}

pub fn exact_m_with_budget(q: usize, k: usize, beta: Beta, budget: u64) -> Result<CodeSearchResult> {
    search(q, k, beta, beta.min_distance(k), budget)
}

/// Largest code whose words are pairwise at distance strictly greater than
/// `β·k`, i.e. minimum distance `⌊β·k⌋ + 1`. Exceeding this size forces two
/// words within relative distance `β`.
pub fn exact_m_strict(q: usize, k: usize, beta: Beta) -> Result<CodeSearchResult> {
    search(q, k, beta, beta.radius(k) + 1, DEFAULT_NODE_BUDGET)
}

fn search(q: usize, k: usize, beta: Beta, d: usize, budget: u64) -> Result<CodeSearchResult> {
    if q < 2 || k == 0 {
        return Err(Error::Domain(format!("need q >= 2 and k >= 1, got q={q}, k={k}")));
    }
    let space = q
        .checked_pow(k as u32)
        .filter(|&s| s <= MAX_SPACE)
        .ok_or_else(|| Error::Resource(format!("search space {q}^{k} exceeds {MAX_SPACE} words")))?;
    let word = |code: usize| QString::new(decode_word(code, q, k), q).expect("in alphabet");
    let result = |size: usize, witness: Vec<QString>, nodes: u64| CodeSearchResult {
        q,
        k,
        beta,
        min_distance: d,
        size,
        witness,
        nodes,
    };

    if d <= 1 {
        // Distinct words are at distance >= 1: the whole space is a code.
        return Ok(result(space, (0..space).map(word).collect(), 0));
    }
    if d > k {
        return Ok(result(1, vec![word(0)], 0));
    }

    let zero = vec![0u8; k];
    let mut best: Vec<Vec<u8>> = vec![zero.clone()];
    let mut nodes = 0u64;
    let far_from_zero: Vec<Vec<u8>> = (0..space)
        .map(|c| decode_word(c, q, k))
        .filter(|w| distance(w, &zero) >= d)
        .collect();

    // The second word is a lightest non-zero codeword, so every later word
    // has at least its weight.
    for weight in d..=k {
        let mut second = vec![0u8; k];
        second[..weight].fill(1);
        let cands: Vec<&Vec<u8>> = far_from_zero
            .iter()
            .filter(|w| distance(w, &zero) >= weight && **w != second && distance(w, &second) >= d)
            .collect();
        if 2 + cands.len() <= best.len() {
            continue;
        }
        let n = cands.len();
        let adj: Vec<Bits> = (0..n)
            .map(|i| {
                let mut row = Bits::empty(n);
                for j in (0..n).filter(|&j| j != i && distance(cands[i], cands[j]) >= d) {
                    row.set(j);
                }
                row
            })
            .collect();
        let mut all = Bits::empty(n);
        (0..n).for_each(|i| all.set(i));
        let mut search = CliqueSearch {
            adj: &adj,
            best_len: best.len().saturating_sub(2),
            best: Vec::new(),
            current: Vec::new(),
            nodes: 0,
            budget: budget.saturating_sub(nodes),
            exhausted: false,
        };
        if n > 0 {
            search.expand(all);
        }
        nodes += search.nodes;
        if search.exhausted {
            return Err(Error::Resource(format!(
                "code search for q={q}, k={k}, d={d} exceeded {budget} nodes; best size so far {}",
                best.len()
            )));
        }
        if !search.best.is_empty() && 2 + search.best.len() > best.len() {
            let mut code = vec![zero.clone(), second.clone()];
            code.extend(search.best.iter().map(|&i| cands[i].clone()));
            best = code;
        } else if best.len() < 2 {
            best = vec![zero.clone(), second.clone()];
        }
    }
    best.sort();
    let witness = best.into_iter().map(|w| QString::new(w, q).expect("in alphabet")).collect::<Vec<_>>();
    Ok(result(witness.len(), witness, nodes))
}

/// `R(q, k, β) = log_q M(q, k, β) / k`.
pub fn rate(q: usize, k: usize, beta: Beta) -> Result<f64> {
    let m = exact_m(q, k, beta)?;
    Ok((m.size as f64).ln() / (q as f64).ln() / k as f64)
}
