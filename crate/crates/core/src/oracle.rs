//! Exhaustive reference solvers for small fault tables.
//!
//! Subsets are enumerated in increasing cardinality and lexicographic order
//! of table positions, so the first hit is the smallest, lexicographically
//! least qualifying set.

use itertools::Itertools;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::table::FaultTable;

/// Hard ceiling imposed by the `u128` row masks.
const MASK_BITS: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OracleLimits {
    pub max_rows: usize,
    pub max_columns: usize,
    pub max_subset_size: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            max_rows: 24,
            max_columns: 16,
            max_subset_size: 12,
        }
    }
}

impl OracleLimits {
    fn check(&self, table: &FaultTable) -> Result<()> {
        let rows = table.test_count();
        if rows > self.max_rows.min(MASK_BITS) {
            return Err(Error::LimitExceeded {
                what: "rows",
                value: rows,
                limit: self.max_rows.min(MASK_BITS),
            });
        }
        if table.column_count() > self.max_columns {
            return Err(Error::LimitExceeded {
                what: "columns",
                value: table.column_count(),
                limit: self.max_columns,
            });
        }
        Ok(())
    }
}

/// True iff every pair of columns differs on some test in `positions`.
pub fn is_distinguishing(table: &FaultTable, positions: &[usize]) -> bool {
    let cols = table.column_count();
    for i in 0..cols {
        for j in (i + 1)..cols {
            if !positions.iter().any(|&p| table.bit(p, i) != table.bit(p, j)) {
                return false;
            }
        }
    }
    true
}

/// True iff every fault class column has a one on some test in `positions`.
pub fn is_detecting(table: &FaultTable, positions: &[usize]) -> bool {
    (1..table.column_count()).all(|c| positions.iter().any(|&p| table.bit(p, c)))
}

fn column_masks(table: &FaultTable) -> Vec<u128> {
    (0..table.column_count())
        .map(|c| {
            (0..table.test_count())
                .filter(|&p| table.bit(p, c))
                .fold(0u128, |m, p| m | (1u128 << p))
        })
        .collect()
}

/// Smallest subset (by cardinality, then lexicographically) whose mask hits
/// every constraint mask.
fn smallest_hitting_set(rows: usize, mut constraints: Vec<u128>, max_size: usize) -> Result<Vec<usize>> {
    if constraints.contains(&0) {
        return Err(Error::Infeasible);
    }
    // most selective constraints first for early rejection
    constraints.sort_unstable_by_key(|m| (m.count_ones(), *m));
    constraints.dedup();
    for k in 0..=rows {
        if k > max_size {
            return Err(Error::LimitExceeded {
                what: "subset size",
                value: k,
                limit: max_size,
            });
        }
        for subset in (0..rows).combinations(k) {
            let mask = subset.iter().fold(0u128, |m, &p| m | (1u128 << p));
            if constraints.iter().all(|c| c & mask != 0) {
                return Ok(subset);
            }
        }
    }
    Err(Error::Infeasible)
}

/// Exact minimum distinguishing test set, as table positions.
pub fn minimal_distinguishing_set(table: &FaultTable, limits: &OracleLimits) -> Result<Vec<usize>> {
    limits.check(table)?;
    let masks = column_masks(table);
    let pairs = masks.iter().tuple_combinations().map(|(a, b)| a ^ b).collect();
    smallest_hitting_set(table.test_count(), pairs, limits.max_subset_size)
}

/// Exact minimum detecting test set, as table positions.
pub fn minimal_detection_set(table: &FaultTable, limits: &OracleLimits) -> Result<Vec<usize>> {
    limits.check(table)?;
    let masks = column_masks(table);
    smallest_hitting_set(table.test_count(), masks[1..].to_vec(), limits.max_subset_size)
}
