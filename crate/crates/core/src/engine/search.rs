//! Shortest path from one string back to a root, by breadth-first search
//! over its ancestors.

use std::collections::HashMap;

use crate::beta::Beta;
use crate::certificate::{CertStep, PathCertificate};
use crate::codec::{ball_rank, slice};
use crate::error::{Error, Result};
use crate::repeat::greedy_dedup_path;
use crate::word::{for_each_decomposition, QString};

pub const DEFAULT_STATE_BUDGET: usize = 5_000_000;

#[derive(Debug, Clone)]
pub struct Distance {
    pub f: usize,
    pub certificate: PathCertificate,
    /// Distinct strings discovered, including `v`.
    pub explored: usize,
}

struct Node {
    symbols: Vec<u8>,
    /// Index of the string this one was reached from (its child) and the
    /// duplication that maps this string onto that child.
    child: Option<(usize, CertStep)>,
}

/// `f_β(v)`: the length of a shortest duplication path from any root to `v`
/// (for `β = 0` the root is necessarily `root(v)`).
///
/// Ancestors are expanded level by level; each distinct string is stored
/// once. The search stops at the first root discovered, which lies on the
/// shallowest level containing a root. Parents are generated in the order of
/// [`for_each_decomposition`], so the certificate is deterministic.
pub fn distance(v: &QString, beta: Beta, budget: usize) -> Result<Distance> {
    if v.is_empty() {
        return Err(Error::Domain("distance is defined for non-empty strings".into()));
    }
    let q = v.q();
    let certificate = |nodes: &[Node], at: usize| {
        let mut steps = Vec::new();
        let mut cursor = at;
        while let Some((next, step)) = nodes[cursor].child {
            steps.push(step);
            cursor = next;
        }
        PathCertificate {
            q,
            root: QString::new(nodes[at].symbols.clone(), q).expect("in alphabet"),
            target: v.clone(),
            beta,
            steps,
        }
    };

    let mut nodes = vec![Node { symbols: v.symbols().to_vec(), child: None }];
    if v.is_root() {
        return Ok(Distance { f: 0, certificate: certificate(&nodes, 0), explored: 1 });
    }
    let mut index: HashMap<Vec<u8>, usize> = HashMap::new();
    index.insert(v.symbols().to_vec(), 0);
    let (mut level_start, mut level_end) = (0usize, 1usize);
    let mut depth = 0;
    while level_start < level_end {
        depth += 1;
        for current in level_start..level_end {
            let s = nodes[current].symbols.clone();
            let mut found = None;
            let mut over_budget = false;
            for_each_decomposition(&s, beta, |d, dist| {
                if found.is_some() || over_budget {
                    return;
                }
                let (l, r, len) = (d.left(), d.right(), d.b_len);
                let mut parent = Vec::with_capacity(s.len() - len);
                parent.extend_from_slice(&s[..r]);
                parent.extend_from_slice(&s[r + len..]);
                if index.contains_key(&parent) {
                    return;
                }
                let j = (dist > 0).then(|| {
                    let child = QString::new(s.clone(), q).expect("in alphabet");
                    ball_rank(&slice(&child, l, len), beta.radius(len), &slice(&child, r, len))
                        .expect("copy lies inside the ball")
                });
                let step = CertStep { p: l, l: len, t: d.c_len, j };
                let is_root = is_root_slice(&parent);
                index.insert(parent.clone(), nodes.len());
                nodes.push(Node { symbols: parent, child: Some((current, step)) });
                if is_root {
                    found = Some(nodes.len() - 1);
                } else if nodes.len() > budget {
                    over_budget = true;
                }
            });
            if let Some(at) = found {
                let cert = certificate(&nodes, at);
                debug_assert_eq!(cert.len(), depth);
                return Ok(Distance { f: depth, certificate: cert, explored: nodes.len() });
            }
            if over_budget {
                return Err(Error::SearchBudget {
                    explored: nodes.len(),
                    upper: greedy_dedup_path(v, beta).len(),
                });
            }
        }
        level_start = level_end;
        level_end = nodes.len();
    }
    unreachable!("every non-root string has an exact parent")
}

fn is_root_slice(s: &[u8]) -> bool {
    let mut seen = 0u64;
    s.iter().all(|&c| {
        let fresh = seen & (1 << c) == 0;
        seen |= 1 << c;
        fresh
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qs(s: &str, q: usize) -> QString {
        QString::parse(s, q).unwrap()
    }

    fn f(s: &str, q: usize, beta: Beta) -> usize {
        let d = distance(&qs(s, q), beta, DEFAULT_STATE_BUDGET).unwrap();
        assert!(d.certificate.verify().is_ok(), "{:?}", d.certificate.verify());
        assert_eq!(d.certificate.len(), d.f);
        d.f
    }

    #[test]
    fn examples() {
        assert_eq!(f("0101", 2, Beta::ZERO), 1);
        assert_eq!(f("000", 2, Beta::ZERO), 2);
        assert_eq!(f("0011", 2, Beta::ONE), 2);
        assert_eq!(f("012", 3, Beta::ZERO), 0);
        assert_eq!(f("00000000", 2, Beta::ZERO), 3);
    }

    #[test]
    fn exact_search_ends_at_first_occurrence_root() {
        for s in ["1100", "2021", "0012210", "10110"] {
            let v = qs(s, 3);
            let d = distance(&v, Beta::ZERO, DEFAULT_STATE_BUDGET).unwrap();
            assert_eq!(d.certificate.root, v.root());
        }
    }

    #[test]
    fn approximate_search_may_end_at_another_root() {
        let mut other_roots = 0;
        for bits in 0u32..1 << 8 {
            let v = QString::new((0..8).map(|i| (bits >> i & 1) as u8).collect(), 2).unwrap();
            let d = distance(&v, Beta::ONE, DEFAULT_STATE_BUDGET).unwrap();
            assert!(d.certificate.verify().is_ok());
            assert!(d.f <= greedy_dedup_path(&v, Beta::ONE).len());
            if d.certificate.root != v.root() {
                other_roots += 1;
            }
        }
        assert!(other_roots > 0);
    }

    #[test]
    fn budget_exhaustion_reports_greedy_bound() {
        let v = qs("0001011100", 2);
        match distance(&v, Beta::ZERO, 3) {
            Err(Error::SearchBudget { explored, upper }) => {
                assert!(explored > 3);
                assert_eq!(upper, greedy_dedup_path(&v, Beta::ZERO).len());
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
