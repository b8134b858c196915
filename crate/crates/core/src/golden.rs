//! Reference values for the binary maximum distance `f(n)`, `n ≤ 32`.

use crate::engine::DistanceTable;

const TABLE1: &str = include_str!("../fixtures/table1.tsv");

/// `(n, f(n))` pairs for `q = 2`, `β = 0`.
pub fn binary_reference() -> Vec<(usize, u32)> {
    TABLE1
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let mut cols = l.split_whitespace().map(|c| c.parse::<u32>().expect("fixture is numeric"));
            let n = cols.next().expect("n column");
            let f = cols.next().expect("f column");
            (n as usize, f as u32)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub n: usize,
    pub expected: u32,
    pub computed: u32,
    pub witness: String,
}

/// Entries of a binary exact table that disagree with the reference.
pub fn check_binary_table(table: &DistanceTable) -> Vec<Mismatch> {
    let reference = binary_reference();
    table
        .entries
        .iter()
        .filter_map(|e| {
            let &(_, expected) = reference.iter().find(|(n, _)| *n == e.n)?;
            (expected != e.fmax).then(|| Mismatch {
                n: e.n,
                expected,
                computed: e.fmax,
                witness: e.witness.to_string(),
            })
        })
        .collect()
}
