//! Exact distances: single-string search, the exhaustive table, and cheap
//! per-string bounds.

mod report;
mod search;
mod table;

pub use report::{distance_bounds, MAX_SUBSTRING_K};
pub use search::{distance, Distance, DEFAULT_STATE_BUDGET};
pub use table::{
    canonical_count, max_distance_table, DistanceDp, DistanceTable, TableEntry, DEFAULT_TABLE_BUDGET,
    MAX_BINARY_LEN,
};
