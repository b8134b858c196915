#![allow(dead_code)]

use dupdist::QString;
use proptest::prelude::*;

pub fn word(bits: u64, len: usize, q: usize) -> QString {
    let mut rest = bits;
    let mut symbols = vec![0u8; len];
    for slot in symbols.iter_mut().rev() {
        *slot = (rest % q as u64) as u8;
        rest /= q as u64;
    }
    QString::new(symbols, q).unwrap()
}

/// Every string over `q` symbols with length in `1..=max_len`.
pub fn all_words(q: usize, max_len: usize) -> impl Iterator<Item = QString> {
    (1..=max_len).flat_map(move |len| (0..(q as u64).pow(len as u32)).map(move |c| word(c, len, q)))
}

pub fn qstring(q: std::ops::RangeInclusive<usize>, len: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = QString> {
    (q, len).prop_flat_map(|(q, len)| {
        proptest::collection::vec(0..q as u8, len).prop_map(move |s| QString::new(s, q).unwrap())
    })
}
