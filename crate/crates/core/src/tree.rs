//! Adaptive diagnosing tree built with the balanced-split row heuristic,
//! plus redundancy elimination and minimization statistics.

use std::fmt::{self, Write as _};

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::table::{column_class, FaultTable};

/// Zero/one counts of a test row over the active columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RowScore {
    pub zeros: usize,
    pub ones: usize,
}

impl RowScore {
    pub fn diff(&self) -> usize {
        self.zeros.abs_diff(self.ones)
    }

    /// Number of (0, 1) column pairs the row separates.
    pub fn pairs(&self) -> usize {
        self.zeros * self.ones
    }

    pub fn splits(&self) -> bool {
        self.zeros > 0 && self.ones > 0
    }
}

/// Scores the row at table position `pos` over `active` columns. The
/// fault-free column always contributes a zero.
pub fn row_score(table: &FaultTable, pos: usize, active: &FixedBitSet) -> RowScore {
    let ones = table.row(pos).intersection_count(active);
    RowScore {
        zeros: active.count_ones(..) - ones,
        ones,
    }
}

/// Picks the splitting row with the smallest `|W0 - W1|` over `active`,
/// skipping positions in `path_used`. Ties go to the lowest test number.
/// Returns a table position.
pub fn select_row(table: &FaultTable, active: &FixedBitSet, path_used: &FixedBitSet) -> Result<usize> {
    let mut best: Option<(usize, usize, usize)> = None; // (diff, test, pos)
    for pos in 0..table.test_count() {
        if path_used.contains(pos) {
            continue;
        }
        let score = row_score(table, pos, active);
        if !score.splits() {
            continue;
        }
        let key = (score.diff(), table.tests()[pos], pos);
        if best.is_none_or(|b| key < b) {
            best = Some(key);
        }
    }
    best.map(|(_, _, pos)| pos).ok_or_else(|| Error::NoSplittingRow {
        columns: active.ones().collect(),
    })
}

/// Outcome a leaf stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Diagnosis {
    FaultFree,
    Class(usize),
}

impl Diagnosis {
    pub fn from_column(column: usize) -> Self {
        match column_class(column) {
            None => Diagnosis::FaultFree,
            Some(k) => Diagnosis::Class(k),
        }
    }
}

impl fmt::Display for Diagnosis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnosis::FaultFree => f.write_str("OK"),
            Diagnosis::Class(k) => write!(f, "{k}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Node {
    Test {
        /// Original row number of the applied test.
        test: usize,
        /// Position of the test in the fault table.
        position: usize,
        zero: usize,
        one: usize,
    },
    Leaf {
        column: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagnosingTree {
    nodes: Vec<Node>,
    root: usize,
    class_count: usize,
}

impl DiagnosingTree {
    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn node(&self, id: usize) -> &Node {
        &self.nodes[id]
    }

    /// Longest root-to-leaf path, counted in tests.
    pub fn depth(&self) -> usize {
        fn go(t: &DiagnosingTree, id: usize) -> usize {
            match t.nodes[id] {
                Node::Leaf { .. } => 0,
                Node::Test { zero, one, .. } => 1 + go(t, zero).max(go(t, one)),
            }
        }
        go(self, self.root)
    }

    /// Lower bound on the depth of any tree separating `m + 1` columns.
    pub fn min_levels(&self) -> usize {
        min_levels(self.class_count)
    }

    /// Leaf columns in left-to-right order.
    pub fn leaves(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.walk(self.root, &mut |_, node| {
            if let Node::Leaf { column } = node {
                out.push(*column);
            }
        });
        out
    }

    pub fn internal_count(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n, Node::Test { .. }))
            .count()
    }

    fn walk<'a>(&'a self, id: usize, f: &mut impl FnMut(usize, &'a Node)) {
        let node = &self.nodes[id];
        f(id, node);
        if let Node::Test { zero, one, .. } = node {
            self.walk(*zero, f);
            self.walk(*one, f);
        }
    }

    /// Follows the tree using `outcome(position)` for each applied test and
    /// returns the path of (node id, outcome) pairs and the reached leaf column.
    pub fn diagnose(&self, mut outcome: impl FnMut(usize) -> bool) -> (Vec<(usize, bool)>, usize) {
        let mut path = Vec::new();
        let mut id = self.root;
        loop {
            match self.nodes[id] {
                Node::Leaf { column } => return (path, column),
                Node::Test {
                    position, zero, one, ..
                } => {
                    let bit = outcome(position);
                    path.push((id, bit));
                    id = if bit { one } else { zero };
                }
            }
        }
    }

    /// Leaf column reached by a column of `table`.
    pub fn route(&self, table: &FaultTable, column: usize) -> usize {
        self.diagnose(|pos| table.bit(pos, column)).1
    }

    /// Graphviz rendering: tests are boxes labeled `T<row>`, leaves are
    /// ellipses labeled with the class id or `OK`.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph diagnosing_tree {\n");
        let mut edges = String::new();
        self.walk(self.root, &mut |id, node| match node {
            Node::Test { test, zero, one, .. } => {
                let _ = writeln!(s, "  n{id} [label=\"T{test}\", shape=box];");
                let _ = writeln!(edges, "  n{id} -> n{zero} [label=\"0\"];");
                let _ = writeln!(edges, "  n{id} -> n{one} [label=\"1\"];");
            }
            Node::Leaf { column } => {
                let _ = writeln!(
                    s,
                    "  n{id} [label=\"{}\", shape=ellipse];",
                    Diagnosis::from_column(*column)
                );
            }
        });
        s.push_str(&edges);
        s.push_str("}\n");
        s
    }

    /// Indented text rendering, zero branch first.
    pub fn to_ascii(&self) -> String {
        fn go(t: &DiagnosingTree, id: usize, prefix: &str, out: &mut String) {
            if let Node::Test { zero, one, .. } = t.nodes[id] {
                for (edge, child, last) in [("0", zero, false), ("1", one, true)] {
                    let (branch, cont) = if last {
                        ("└─", "   ")
                    } else {
                        ("├─", "│  ")
                    };
                    let _ = writeln!(out, "{prefix}{branch}{edge}─ {}", t.label(child));
                    go(t, child, &format!("{prefix}{cont}"), out);
                }
            }
        }
        let mut out = format!("{}\n", self.label(self.root));
        go(self, self.root, "", &mut out);
        out
    }

    fn label(&self, id: usize) -> String {
        match self.nodes[id] {
            Node::Test { test, .. } => format!("T{test}"),
            Node::Leaf { column } => Diagnosis::from_column(column).to_string(),
        }
    }
}

/// `ceil(log2(m + 1))`.
pub fn min_levels(class_count: usize) -> usize {
    let leaves = class_count + 1;
    (usize::BITS - (leaves - 1).leading_zeros()) as usize
}

struct Builder<'a> {
    table: &'a FaultTable,
    nodes: Vec<Node>,
    selected: Vec<usize>,
    seen: FixedBitSet,
}

impl Builder<'_> {
    fn build(&mut self, active: FixedBitSet, path_used: &mut FixedBitSet) -> Result<usize> {
        if active.count_ones(..) == 1 {
            let column = active.minimum().expect("one active column");
            self.nodes.push(Node::Leaf { column });
            return Ok(self.nodes.len() - 1);
        }
        let pos = select_row(self.table, &active, path_used)?;
        if !self.seen.put(pos) {
            self.selected.push(pos);
        }
        let id = self.nodes.len();
        self.nodes.push(Node::Test {
            test: self.table.tests()[pos],
            position: pos,
            zero: usize::MAX,
            one: usize::MAX,
        });

        let mut ones = active.clone();
        ones.intersect_with(self.table.row(pos));
        let mut zeros = active;
        zeros.difference_with(&ones);

        path_used.insert(pos);
        let zero = self.build(zeros, path_used)?;
        let one = self.build(ones, path_used)?;
        path_used.remove(pos);

        if let Node::Test { zero: z, one: o, .. } = &mut self.nodes[id] {
            *z = zero;
            *o = one;
        }
        Ok(id)
    }
}

/// Builds the diagnosing tree over every column of a deduplicated table.
///
/// A test is excluded only below the node that applies it, so the same test
/// may appear in sibling subtrees. Returns the tree and the table positions
/// of the tests used, in first-use (pre-order, zero branch first) order.
pub fn build_tree(table: &FaultTable) -> Result<(DiagnosingTree, Vec<usize>)> {
    let mut active = FixedBitSet::with_capacity(table.column_count());
    active.insert_range(..);
    let mut builder = Builder {
        table,
        nodes: Vec::new(),
        selected: Vec::new(),
        seen: FixedBitSet::with_capacity(table.test_count()),
    };
    let mut path_used = FixedBitSet::with_capacity(table.test_count());
    let root = builder.build(active, &mut path_used)?;
    Ok((
        DiagnosingTree {
            nodes: builder.nodes,
            root,
            class_count: table.class_count(),
        },
        builder.selected,
    ))
}

/// Drops tests, latest selection first, while the remainder still
/// separates every pair of columns. The result is inclusion-minimal.
pub fn eliminate_redundant(selected: &[usize], table: &FaultTable) -> Result<Vec<usize>> {
    if !table.separates_all(selected) {
        return Err(Error::NotDistinguishing);
    }
    let mut current = selected.to_vec();
    for &pos in selected.iter().rev() {
        let candidate: Vec<usize> = current.iter().copied().filter(|&p| p != pos).collect();
        if table.separates_all(&candidate) {
            current = candidate;
        }
    }
    Ok(current)
}

/// Tests chosen by the tree and the survivors of redundancy elimination,
/// as original row numbers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EssentialTestSet {
    pub selected: Vec<usize>,
    #[serde(rename = "final")]
    pub final_tests: Vec<usize>,
}

impl EssentialTestSet {
    pub fn from_positions(table: &FaultTable, selected: &[usize], final_set: &[usize]) -> Self {
        let tests = |ps: &[usize]| ps.iter().map(|&p| table.tests()[p]).collect();
        EssentialTestSet {
            selected: tests(selected),
            final_tests: tests(final_set),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinimizationReport {
    pub n: usize,
    /// Total tests, `2^n`.
    pub a: usize,
    pub fault_count_raw: usize,
    pub class_count: usize,
    /// Minimized tests.
    pub b: usize,
    pub percentage: f64,
    pub elapsed_seconds: f64,
}

impl MinimizationReport {
    /// Percentage rounded half-up to one decimal place, computed exactly.
    pub fn percentage_display(&self) -> String {
        format_percentage(self.a, self.b)
    }
}

pub fn minimization_report(
    n: usize,
    fault_count_raw: usize,
    class_count: usize,
    final_count: usize,
    elapsed_seconds: f64,
) -> MinimizationReport {
    let a = 1usize << n;
    assert!(final_count <= a, "b = {final_count} exceeds 2^{n}");
    MinimizationReport {
        n,
        a,
        fault_count_raw,
        class_count,
        b: final_count,
        percentage: (a - final_count) as f64 / a as f64 * 100.0,
        elapsed_seconds,
    }
}

/// `(a - b) / a * 100` to one decimal, rounding halves up, in integer
/// arithmetic so that exact halves are not lost to binary floating point.
pub fn format_percentage(a: usize, b: usize) -> String {
    let num = (a - b) as u128 * 1000;
    let a = a as u128;
    let mut tenths = num / a;
    if 2 * (num % a) >= a {
        tenths += 1;
    }
    format!("{}.{}", tenths / 10, tenths % 10)
}
