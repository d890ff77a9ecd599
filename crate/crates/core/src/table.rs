//! Fault dictionary and the detection-bit fault table.
//!
//! Column `0` of a [`FaultTable`] is the fault-free circuit, whose detection
//! bits are all zero; fault class `k` lives in column `k + 1`.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::fault::{CircuitTables, Column, FaultClass};
use crate::sop::{assignment_from_index, InputVector, SopExpr};

/// Default cap on dictionary rows, `2^20`.
pub const DEFAULT_ROW_CAP: usize = 1 << 20;

/// Column index of the fault-free circuit.
pub const FAULT_FREE: usize = 0;

/// Table column holding fault class `class_id`.
#[inline]
pub fn class_column(class_id: usize) -> usize {
    class_id + 1
}

/// Fault class held by table column `column`, or `None` for fault-free.
#[inline]
pub fn column_class(column: usize) -> Option<usize> {
    column.checked_sub(1)
}

/// Fault-free output and every class's faulty output over all `2^n` rows.
///
/// Stored column-major; [`FaultDictionary::row`] gives the row view.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaultDictionary {
    n: usize,
    fault_free: Column,
    class_columns: Vec<Column>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DictionaryRow {
    pub inputs: InputVector,
    pub z: bool,
    /// Faulty output per class, in class id order.
    pub faults: Vec<bool>,
}

impl FaultDictionary {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn row_count(&self) -> usize {
        1 << self.n
    }

    pub fn class_count(&self) -> usize {
        self.class_columns.len()
    }

    pub fn fault_free(&self) -> &Column {
        &self.fault_free
    }

    pub fn class_column(&self, class_id: usize) -> &Column {
        &self.class_columns[class_id]
    }

    pub fn row(&self, r: usize) -> DictionaryRow {
        DictionaryRow {
            inputs: assignment_from_index(r, self.n).expect("row within dictionary"),
            z: self.fault_free.contains(r),
            faults: self.class_columns.iter().map(|c| c.contains(r)).collect(),
        }
    }

    pub fn rows(&self) -> impl Iterator<Item = DictionaryRow> + '_ {
        (0..self.row_count()).map(|r| self.row(r))
    }
}

/// Builds the dictionary from the circuit and its collapsed fault classes.
pub fn build_dictionary(expr: &SopExpr, classes: &[FaultClass], row_cap: usize) -> Result<FaultDictionary> {
    let n = expr.n();
    if n >= usize::BITS as usize - 1 || (1usize << n) > row_cap {
        return Err(Error::DimensionOverflow { n, cap: row_cap });
    }
    let tables = CircuitTables::new(expr);
    Ok(FaultDictionary {
        n,
        fault_free: tables.fault_free().clone(),
        class_columns: classes.iter().map(|c| c.column.clone()).collect(),
    })
}

/// Detection bits for a set of tests against every column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaultTable {
    tests: Vec<usize>,
    rows: Vec<FixedBitSet>,
    class_count: usize,
    row_groups: Vec<Vec<usize>>,
    column_groups: Vec<Vec<usize>>,
}

impl FaultTable {
    /// Builds a table directly from detection rows over the `class_count`
    /// fault classes. Bit `k` of `class_bits[i]` is the detection bit of
    /// class `k` under test `tests[i]`.
    pub fn from_rows(tests: Vec<usize>, class_bits: Vec<Vec<bool>>, class_count: usize) -> Self {
        assert_eq!(tests.len(), class_bits.len());
        let rows = class_bits
            .iter()
            .map(|bits| {
                assert_eq!(bits.len(), class_count);
                let mut row = FixedBitSet::with_capacity(class_count + 1);
                for (k, &b) in bits.iter().enumerate() {
                    row.set(class_column(k), b);
                }
                row
            })
            .collect();
        let row_groups = tests.iter().map(|&t| vec![t]).collect();
        FaultTable {
            tests,
            rows,
            class_count,
            row_groups,
            column_groups: Vec::new(),
        }
    }

    /// Original row numbers of the tests, in table order.
    pub fn tests(&self) -> &[usize] {
        &self.tests
    }

    pub fn test_count(&self) -> usize {
        self.tests.len()
    }

    /// Number of fault classes `m`.
    pub fn class_count(&self) -> usize {
        self.class_count
    }

    /// `m + 1`: the classes plus the fault-free column.
    pub fn column_count(&self) -> usize {
        self.class_count + 1
    }

    /// Detection row at table position `pos`, indexed by column.
    pub fn row(&self, pos: usize) -> &FixedBitSet {
        &self.rows[pos]
    }

    pub fn bit(&self, pos: usize, column: usize) -> bool {
        self.rows[pos].contains(column)
    }

    pub fn position_of(&self, test: usize) -> Option<usize> {
        self.tests.iter().position(|&t| t == test)
    }

    /// Original rows merged into each surviving test, including itself.
    pub fn row_groups(&self) -> &[Vec<usize>] {
        &self.row_groups
    }

    pub fn column_groups(&self) -> &[Vec<usize>] {
        &self.column_groups
    }

    /// Detection bits of `column` over table positions.
    pub fn column(&self, column: usize) -> FixedBitSet {
        let mut c = FixedBitSet::with_capacity(self.rows.len());
        for (pos, row) in self.rows.iter().enumerate() {
            c.set(pos, row.contains(column));
        }
        c
    }

    /// True when the rows at `positions` leave every pair of columns
    /// different. Computed by refining the column partition row by row.
    pub fn separates_all(&self, positions: &[usize]) -> bool {
        let mut block: Vec<usize> = vec![0; self.column_count()];
        let mut blocks = 1usize;
        for &pos in positions {
            let row = &self.rows[pos];
            let mut split: HashMap<(usize, bool), usize> = HashMap::new();
            for (col, b) in block.iter_mut().enumerate() {
                let key = (*b, row.contains(col));
                let next = split.len();
                *b = *split.entry(key).or_insert(next);
            }
            blocks = split.len();
            if blocks == self.column_count() {
                return true;
            }
        }
        blocks == self.column_count()
    }
}

/// Fault table over every input row, before deduplication.
pub fn detection_matrix(dict: &FaultDictionary) -> FaultTable {
    let rows_n = dict.row_count();
    let m = dict.class_count();
    let mut rows = vec![FixedBitSet::with_capacity(m + 1); rows_n];
    for k in 0..m {
        let mut detect = dict.class_column(k).clone();
        detect.symmetric_difference_with(dict.fault_free());
        for t in detect.ones() {
            rows[t].insert(class_column(k));
        }
    }
    FaultTable {
        tests: (0..rows_n).collect(),
        rows,
        class_count: m,
        row_groups: (0..rows_n).map(|t| vec![t]).collect(),
        column_groups: Vec::new(),
    }
}

/// Merges tests with identical detection rows into the lowest-numbered
/// one and verifies that all columns are pairwise distinct.
pub fn dedup(table: &FaultTable) -> Result<FaultTable> {
    let mut order: Vec<usize> = (0..table.test_count()).collect();
    order.sort_by_key(|&p| table.tests[p]);

    let mut index: HashMap<&FixedBitSet, usize> = HashMap::new();
    let mut tests = Vec::new();
    let mut rows = Vec::new();
    let mut row_groups: Vec<Vec<usize>> = Vec::new();
    for pos in order {
        let row = &table.rows[pos];
        match index.get(row) {
            Some(&slot) => row_groups[slot].extend_from_slice(&table.row_groups[pos]),
            None => {
                index.insert(row, tests.len());
                tests.push(table.tests[pos]);
                rows.push(row.clone());
                row_groups.push(table.row_groups[pos].clone());
            }
        }
    }
    for g in &mut row_groups {
        g.sort_unstable();
    }

    let out = FaultTable {
        tests,
        rows,
        class_count: table.class_count,
        row_groups,
        column_groups: table.column_groups.clone(),
    };

    let mut seen: HashMap<FixedBitSet, usize> = HashMap::new();
    for col in 0..out.column_count() {
        if let Some(prev) = seen.insert(out.column(col), col) {
            return Err(Error::InternalInconsistency(format!(
                "columns {prev} and {col} have identical detection bits"
            )));
        }
    }
    Ok(out)
}
