//! Cheap per-string bounds on `f_β(v)` without exhaustive search.

use crate::beta::Beta;
use crate::bounds::{trivial_lower_bound_f, BoundKind, BoundReport, BoundValue};
use crate::debruijn::substring_lower_bound;
use crate::repeat::greedy_dedup_path;
use crate::word::QString;

/// Substring-count bound orders tried, `2..=MAX_SUBSTRING_K`.
pub const MAX_SUBSTRING_K: usize = 12;

/// Lower bounds (trivial, substring count) and the greedy upper bound for
/// one string. A root reports zero on both sides.
pub fn distance_bounds(v: &QString, beta: Beta) -> BoundReport {
    let n = v.len() as u64;
    let mut report = BoundReport::new(v.q(), n, beta);
    if v.is_root() {
        report.push("trivial", BoundKind::Lower, BoundValue::Int(0), true, "v is a root");
        report.push("greedy", BoundKind::Upper, BoundValue::Int(0), true, "v is a root");
        return report;
    }
    report.push(
        "trivial",
        BoundKind::Lower,
        BoundValue::Int(trivial_lower_bound_f(v.q(), n)),
        true,
        "each duplication at most doubles the length",
    );
    // Removing a right copy can destroy substrings that an approximate copy
    // would not have created, so the substring argument is exact-only.
    if beta.is_zero() {
        let best = (2..=MAX_SUBSTRING_K.min(v.len()))
            .filter_map(|k| substring_lower_bound(v, k).ok().map(|b| (b, k)))
            .max_by_key(|&(b, k)| (b, std::cmp::Reverse(k)));
        if let Some((value, k)) = best {
            report.push(
                "substring-count",
                BoundKind::Lower,
                BoundValue::Int(value as u64),
                true,
                &format!("distinct {k}-grams, best k in 2..={MAX_SUBSTRING_K}"),
            );
        }
    }
    report.push(
        "greedy",
        BoundKind::Upper,
        BoundValue::Int(greedy_dedup_path(v, beta).len() as u64),
        true,
        "length of the greedy deduplication certificate",
    );
    report
}
