//! Paths as sequences of quadruples `(p, ℓ, t, j)`.
//!
//! The approximate copy `b̂` of a duplicated block `b` is identified by its
//! rank `j` among all words within Hamming radius `⌊β·ℓ⌋` of `b`, listed in
//! plain lexicographic order of the words themselves. Ranking and unranking
//! walk the word digit by digit and count completions that stay inside the
//! remaining radius, so no ball is ever enumerated.
//!
//! The ball size used for the range of `j` is the full q-ary volume
//! `Σ_{s ≤ r} C(ℓ, s)·(q−1)^s`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::beta::Beta;
use crate::certificate::PathCertificate;
use crate::error::{Error, Result};
use crate::word::{hamming, DupStep, QString};

/// One approximate duplication: the step `(p, ℓ, t)` plus the ball index `j`
/// of the inserted copy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ApproxDupStep {
    pub p: usize,
    pub l: usize,
    pub t: usize,
    pub j: u128,
}

impl ApproxDupStep {
    pub fn step(&self) -> DupStep {
        DupStep::new(self.p, self.l, self.t)
    }
}

/// Number of words of length `len` within Hamming radius `r` of a fixed word.
pub fn ball_size(len: usize, r: usize, q: usize) -> Result<u128> {
    let mut total: u128 = 0;
    let mut binom: u128 = 1;
    let mut power: u128 = 1;
    for s in 0..=r.min(len) {
        if s > 0 {
            binom = binom
                .checked_mul((len - s + 1) as u128)
                .ok_or_else(|| overflow(len, r, q))?
                / s as u128;
            power = power.checked_mul(q as u128 - 1).ok_or_else(|| overflow(len, r, q))?;
        }
        let term = binom.checked_mul(power).ok_or_else(|| overflow(len, r, q))?;
        total = total.checked_add(term).ok_or_else(|| overflow(len, r, q))?;
    }
    Ok(total)
}

fn overflow(len: usize, r: usize, q: usize) -> Error {
    Error::Overflow(format!("ball size for len={len}, r={r}, q={q} exceeds 128 bits"))
}

/// `sizes[k][s]` = ball size for length `k` and radius `s`, for `k ≤ len`, `s ≤ r`,
/// from `V(k, s) = V(k−1, s) + (q−1)·V(k−1, s−1)`.
fn ball_table(len: usize, r: usize, q: usize) -> Result<Vec<Vec<u128>>> {
    let mut sizes = vec![vec![1u128; r + 1]];
    for k in 1..=len {
        let prev = &sizes[k - 1];
        let mut row = Vec::with_capacity(r + 1);
        for s in 0..=r {
            let grow = if s == 0 {
                Some(0)
            } else {
                prev[s - 1].checked_mul(q as u128 - 1)
            };
            let v = grow.and_then(|g| g.checked_add(prev[s])).ok_or_else(|| overflow(k, s, q))?;
            row.push(v);
        }
        sizes.push(row);
    }
    Ok(sizes)
}

/// Words within Hamming radius `r` of a centre, in lexicographic order, with
/// the completion counts precomputed for repeated ranking.
#[derive(Debug, Clone)]
pub struct HammingBall {
    center: QString,
    r: usize,
    sizes: Vec<Vec<u128>>,
}

impl HammingBall {
    pub fn new(center: &QString, r: usize) -> Result<Self> {
        let r = r.min(center.len());
        let sizes = ball_table(center.len(), r, center.q())?;
        Ok(HammingBall { center: center.clone(), r, sizes })
    }

    pub fn size(&self) -> u128 {
        self.sizes[self.center.len()][self.r]
    }

    /// The `j`-th word (0-based).
    pub fn unrank(&self, mut j: u128) -> Result<QString> {
        if j >= self.size() {
            return Err(Error::Domain(format!("ball index {j} out of range 0..{}", self.size())));
        }
        let len = self.center.len();
        let mut out = Vec::with_capacity(len);
        let mut budget = self.r;
        for (i, &c) in self.center.symbols().iter().enumerate() {
            let rest = len - i - 1;
            for s in 0..self.center.q() as u8 {
                let cost = usize::from(s != c);
                if cost > budget {
                    continue;
                }
                let count = self.sizes[rest][budget - cost];
                if j < count {
                    out.push(s);
                    budget -= cost;
                    break;
                }
                j -= count;
            }
        }
        Ok(QString::from_parts(out, self.center.q() as u8))
    }

    pub fn rank(&self, word: &QString) -> Result<u128> {
        let center = &self.center;
        if word.len() != center.len() || word.q() != center.q() {
            return Err(Error::Domain("word and center differ in length or alphabet".into()));
        }
        let d = hamming(center.symbols(), word.symbols());
        if d > self.r {
            return Err(Error::Domain(format!(
                "word {word} lies at distance {d} > radius {} from {center}",
                self.r
            )));
        }
        let len = center.len();
        let mut rank = 0u128;
        let mut budget = self.r;
        for (i, (&c, &w)) in center.symbols().iter().zip(word.symbols()).enumerate() {
            let rest = len - i - 1;
            // Smaller symbols: the centre symbol keeps the budget, the rest spend one.
            if c < w {
                rank += self.sizes[rest][budget];
            }
            let others = w as u128 - u128::from(c < w);
            if others > 0 && budget > 0 {
                rank += others * self.sizes[rest][budget - 1];
            }
            budget -= usize::from(w != c);
        }
        Ok(rank)
    }
}

/// The `j`-th word (0-based, lexicographic) among words within radius `r` of `center`.
pub fn ball_unrank(center: &QString, r: usize, j: u128) -> Result<QString> {
    HammingBall::new(center, r)?.unrank(j)
}

/// Lexicographic rank of `word` in the ball of radius `r` around `center`.
pub fn ball_rank(center: &QString, r: usize, word: &QString) -> Result<u128> {
    HammingBall::new(center, r)?.rank(word)
}

/// Turns a verified certificate into quadruples under the radius `⌊β·ℓ⌋`.
pub fn encode_path(cert: &PathCertificate, beta: Beta) -> Result<Vec<ApproxDupStep>> {
    let mut current = cert.root.clone();
    let mut out = Vec::with_capacity(cert.steps.len());
    for (i, step) in cert.steps.iter().enumerate() {
        let dup = step.dup();
        dup.check(current.len())
            .map_err(|e| Error::Encoding { step: i, reason: e.to_string() })?;
        let next = cert
            .apply_step(&current, step)
            .map_err(|e| Error::Encoding { step: i, reason: e.to_string() })?;
        let block = slice(&current, dup.p, dup.l);
        let copy = slice(&next, dup.copy_offset(), dup.l);
        let radius = beta.radius(dup.l);
        let d = hamming(block.symbols(), copy.symbols());
        if d > radius {
            return Err(Error::Encoding {
                step: i,
                reason: format!("copy {copy} is at distance {d} from {block}, radius is {radius}"),
            });
        }
        out.push(ApproxDupStep {
            p: dup.p,
            l: dup.l,
            t: dup.t,
            j: ball_rank(&block, radius, &copy)?,
        });
        current = next;
    }
    Ok(out)
}

/// Replays quadruples from `root`, materializing each copy by unranking.
pub fn decode_path(q: usize, root: &QString, steps: &[ApproxDupStep], beta: Beta) -> Result<QString> {
    if root.q() != q {
        return Err(Error::Decoding { step: 0, reason: format!("root alphabet {} != q={q}", root.q()) });
    }
    if root.is_empty() || !root.is_root() {
        return Err(Error::Decoding { step: 0, reason: format!("{root} is not a root") });
    }
    let mut current = root.clone();
    for (i, s) in steps.iter().enumerate() {
        let dup = s.step();
        dup.check(current.len())
            .map_err(|e| Error::Decoding { step: i, reason: e.to_string() })?;
        let block = slice(&current, dup.p, dup.l);
        let copy = ball_unrank(&block, beta.radius(dup.l), s.j)
            .map_err(|e| Error::Decoding { step: i, reason: e.to_string() })?;
        current = current.duplicate_with(dup, copy.symbols());
    }
    Ok(current)
}

pub(crate) fn slice(s: &QString, at: usize, len: usize) -> QString {
    QString::from_parts(s.symbols()[at..at + len].to_vec(), s.q() as u8)
}

/// Compact text form `p,l,t,j;p,l,t,j;…`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct QuadrupleList(pub Vec<ApproxDupStep>);

impl fmt::Display for QuadrupleList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{},{},{},{}", s.p, s.l, s.t, s.j)?;
        }
        Ok(())
    }
}

impl FromStr for QuadrupleList {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut out = Vec::new();
        for part in s.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let fields: Vec<&str> = part.split(',').map(str::trim).collect();
            let bad = || Error::Parse(format!("bad quadruple {part:?}; expected p,l,t,j"));
            if fields.len() != 4 {
                return Err(bad());
            }
            let num = |i: usize| fields[i].parse::<usize>().map_err(|_| bad());
            out.push(ApproxDupStep {
                p: num(0)?,
                l: num(1)?,
                t: num(2)?,
                j: fields[3].parse().map_err(|_| bad())?,
            });
        }
        Ok(QuadrupleList(out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_recurrence_matches_closed_form() {
        for q in 2..=5 {
            let t = ball_table(9, 9, q).unwrap();
            for (k, row) in t.iter().enumerate() {
                for (s, &v) in row.iter().enumerate() {
                    assert_eq!(v, ball_size(k, s, q).unwrap());
                }
            }
        }
    }

    fn qs(s: &str, q: usize) -> QString {
        QString::parse(s, q).unwrap()
    }

    #[test]
    fn ball_size_examples() {
        assert_eq!(ball_size(2, 1, 2).unwrap(), 3);
        assert_eq!(ball_size(3, 3, 2).unwrap(), 8);
        assert_eq!(ball_size(2, 1, 3).unwrap(), 5);
        assert_eq!(ball_size(4, 9, 3).unwrap(), 81);
        assert!(ball_size(40, 40, 36).is_err());
    }

    #[test]
    fn unrank_examples() {
        let c = qs("00", 2);
        let got: Vec<String> = (0..3).map(|j| ball_unrank(&c, 1, j).unwrap().to_string()).collect();
        assert_eq!(got, ["00", "01", "10"]);
        assert_eq!(ball_unrank(&qs("11", 2), 0, 0).unwrap(), qs("11", 2));
        assert_eq!(ball_unrank(&qs("0", 3), 1, 2).unwrap(), qs("2", 3));
        assert!(ball_unrank(&c, 1, 3).is_err());
    }

    #[test]
    fn rank_examples() {
        assert_eq!(ball_rank(&qs("00", 2), 1, &qs("10", 2)).unwrap(), 2);
        assert_eq!(ball_rank(&qs("00", 2), 1, &qs("00", 2)).unwrap(), 0);
        assert_eq!(ball_rank(&qs("11", 2), 1, &qs("01", 2)).unwrap(), 0);
        assert_eq!(ball_rank(&qs("11", 2), 1, &qs("11", 2)).unwrap(), 2);
        assert_eq!(ball_rank(&qs("00", 2), 2, &qs("11", 2)).unwrap(), 3);
        assert!(ball_rank(&qs("00", 2), 1, &qs("11", 2)).is_err());
        assert!(ball_rank(&qs("00", 2), 1, &qs("0", 2)).is_err());
    }

    #[test]
    fn quadruple_text() {
        let list: QuadrupleList = "0,1,0,0; 0,2,0,3".parse().unwrap();
        assert_eq!(list.0[1], ApproxDupStep { p: 0, l: 2, t: 0, j: 3 });
        assert_eq!(list.to_string(), "0,1,0,0;0,2,0,3");
        assert!("0,1,0".parse::<QuadrupleList>().is_err());
        assert!("".parse::<QuadrupleList>().unwrap().0.is_empty());
    }

    #[test]
    fn decode_examples() {
        let one = ApproxDupStep { p: 0, l: 1, t: 0, j: 0 };
        assert_eq!(decode_path(2, &qs("0", 2), &[one], Beta::ZERO).unwrap(), qs("00", 2));
        let steps = [one, ApproxDupStep { p: 0, l: 2, t: 0, j: 3 }];
        assert_eq!(decode_path(2, &qs("0", 2), &steps, Beta::ONE).unwrap(), qs("0011", 2));
        let dup01 = ApproxDupStep { p: 0, l: 2, t: 0, j: 0 };
        assert_eq!(decode_path(2, &qs("01", 2), &[dup01], Beta::ZERO).unwrap(), qs("0101", 2));
    }

    #[test]
    fn decode_errors_name_the_step() {
        let steps = [
            ApproxDupStep { p: 0, l: 1, t: 0, j: 0 },
            ApproxDupStep { p: 0, l: 3, t: 0, j: 0 },
        ];
        match decode_path(2, &qs("0", 2), &steps, Beta::ZERO) {
            Err(Error::Decoding { step, .. }) => assert_eq!(step, 1),
            other => panic!("unexpected {other:?}"),
        }
        assert!(decode_path(2, &qs("00", 2), &[], Beta::ZERO).is_err());
        let big_j = [ApproxDupStep { p: 0, l: 1, t: 0, j: 1 }];
        assert!(matches!(
            decode_path(2, &qs("0", 2), &big_j, Beta::ZERO),
            Err(Error::Decoding { step: 0, .. })
        ));
    }
}
