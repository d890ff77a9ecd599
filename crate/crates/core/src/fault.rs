//! Single stuck-at faults on the two-level circuit and their functional
//! collapsing.

use std::collections::HashMap;
use std::fmt;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::Serialize;

use crate::sop::{InputVector, SopExpr};

/// A truth-table column: bit `t` is the circuit output on row `t`.
pub type Column = FixedBitSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind")]
pub enum FaultSite {
    /// Input lead of an AND gate, i.e. one literal occurrence.
    LiteralInput { term: usize, literal: usize },
    /// Output of an AND gate.
    TermOutput { term: usize },
    /// Output of the OR gate.
    CircuitOutput,
}

impl fmt::Display for FaultSite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FaultSite::LiteralInput { term, literal } => write!(f, "t{term}.l{literal}"),
            FaultSite::TermOutput { term } => write!(f, "t{term}.out"),
            FaultSite::CircuitOutput => f.write_str("out"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Fault {
    pub fault_id: usize,
    pub site: FaultSite,
    pub stuck_value: bool,
}

impl fmt::Display for Fault {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} s-a-{}", self.site, self.stuck_value as u8)
    }
}

/// Faults with bit-identical output columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaultClass {
    pub class_id: usize,
    pub members: Vec<Fault>,
    pub column: Column,
}

impl FaultClass {
    /// Lowest-numbered member.
    pub fn representative(&self) -> &Fault {
        &self.members[0]
    }

    pub fn contains(&self, fault_id: usize) -> bool {
        self.members.iter().any(|f| f.fault_id == fault_id)
    }
}

/// Faults no input vector can reveal.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct UndetectableReport {
    pub faults: Vec<Fault>,
}

/// Every single stuck-at fault of `expr`, in structural order: literal
/// inputs by (term, position), then term outputs, then the circuit output.
/// Stuck-at-0 precedes stuck-at-1 at each site.
pub fn enumerate_faults(expr: &SopExpr) -> Vec<Fault> {
    let literal_sites = expr.terms().iter().flat_map(|t| {
        (0..t.literals.len()).map(move |literal| FaultSite::LiteralInput {
            term: t.term_index,
            literal,
        })
    });
    let term_sites = (0..expr.terms().len()).map(|term| FaultSite::TermOutput { term });
    literal_sites
        .chain(term_sites)
        .chain(std::iter::once(FaultSite::CircuitOutput))
        .flat_map(|site| [false, true].map(|stuck_value| (site, stuck_value)))
        .enumerate()
        .map(|(fault_id, (site, stuck_value))| Fault {
            fault_id,
            site,
            stuck_value,
        })
        .collect()
}

/// Evaluates the circuit on `v` with `fault` injected.
///
/// Scalar reference path; [`CircuitTables`] computes whole columns.
pub fn faulty_evaluate(expr: &SopExpr, fault: &Fault, v: &InputVector) -> bool {
    let bits = &v.bits;
    let term_value = |ti: usize| -> bool {
        let literals = &expr.terms()[ti].literals;
        match fault.site {
            FaultSite::TermOutput { term } if term == ti => fault.stuck_value,
            FaultSite::LiteralInput { term, literal } if term == ti => {
                literals.iter().enumerate().all(|(i, l)| {
                    if i == literal {
                        fault.stuck_value
                    } else {
                        l.eval(bits)
                    }
                })
            }
            _ => literals.iter().all(|l| l.eval(bits)),
        }
    };
    match fault.site {
        FaultSite::CircuitOutput => fault.stuck_value,
        _ => (0..expr.terms().len()).any(term_value),
    }
}

/// Word-parallel truth tables of every literal and term of a circuit.
///
/// Columns for individual faults are derived by recomputing only the
/// affected gate.
#[derive(Debug, Clone)]
pub struct CircuitTables {
    rows: usize,
    literals: Vec<Vec<Column>>,
    terms: Vec<Column>,
    output: Column,
}

impl CircuitTables {
    pub fn new(expr: &SopExpr) -> Self {
        let n = expr.n();
        let rows = expr.row_count();
        let vars: Vec<Column> = (0..n)
            .map(|i| {
                let shift = n - 1 - i;
                let mut c = Column::with_capacity(rows);
                for t in (0..rows).filter(|t| (t >> shift) & 1 == 1) {
                    c.insert(t);
                }
                c
            })
            .collect();
        let literals: Vec<Vec<Column>> = expr
            .terms()
            .iter()
            .map(|term| {
                term.literals
                    .iter()
                    .map(|l| {
                        let mut c = vars[l.var_index].clone();
                        if l.complemented {
                            c.toggle_range(..);
                        }
                        c
                    })
                    .collect()
            })
            .collect();
        let terms: Vec<Column> = literals
            .iter()
            .map(|lits| and_all(rows, lits.iter(), None))
            .collect();
        let mut output = Column::with_capacity(rows);
        for t in &terms {
            output.union_with(t);
        }
        CircuitTables {
            rows,
            literals,
            terms,
            output,
        }
    }

    pub fn fault_free(&self) -> &Column {
        &self.output
    }

    pub fn fault_column(&self, fault: &Fault) -> Column {
        match fault.site {
            FaultSite::CircuitOutput => constant(self.rows, fault.stuck_value),
            FaultSite::TermOutput { term } => {
                self.output_with_term(term, constant(self.rows, fault.stuck_value))
            }
            FaultSite::LiteralInput { term, literal } => {
                let faulty_term = if fault.stuck_value {
                    and_all(self.rows, self.literals[term].iter(), Some(literal))
                } else {
                    Column::with_capacity(self.rows)
                };
                self.output_with_term(term, faulty_term)
            }
        }
    }

    fn output_with_term(&self, replaced: usize, mut acc: Column) -> Column {
        for (i, t) in self.terms.iter().enumerate() {
            if i != replaced {
                acc.union_with(t);
            }
        }
        acc
    }
}

fn constant(rows: usize, value: bool) -> Column {
    let mut c = Column::with_capacity(rows);
    if value {
        c.insert_range(..);
    }
    c
}

fn and_all<'a>(rows: usize, cols: impl Iterator<Item = &'a Column>, skip: Option<usize>) -> Column {
    let mut acc = constant(rows, true);
    for (i, c) in cols.enumerate() {
        if Some(i) != skip {
            acc.intersect_with(c);
        }
    }
    acc
}

/// The fault-free output column `z`.
pub fn fault_free_column(expr: &SopExpr) -> Column {
    CircuitTables::new(expr).output
}

/// Output column of the circuit under `fault`.
pub fn fault_column(expr: &SopExpr, fault: &Fault) -> Column {
    CircuitTables::new(expr).fault_column(fault)
}

/// Groups faults by identical output column.
///
/// Groups equal to the fault-free column are reported as undetectable; the
/// rest become classes ordered by their lowest fault id. Column computation
/// runs on the current rayon pool; the result does not depend on it.
pub fn collapse(expr: &SopExpr, faults: &[Fault]) -> (Vec<FaultClass>, UndetectableReport) {
    let tables = CircuitTables::new(expr);
    let columns: Vec<Column> = faults.par_iter().map(|f| tables.fault_column(f)).collect();

    let mut index: HashMap<&Column, usize> = HashMap::new();
    let mut groups: Vec<(Vec<Fault>, &Column)> = Vec::new();
    let mut undetectable = UndetectableReport::default();
    for (fault, column) in faults.iter().zip(&columns) {
        if column == tables.fault_free() {
            undetectable.faults.push(*fault);
            continue;
        }
        let slot = *index.entry(column).or_insert_with(|| {
            groups.push((Vec::new(), column));
            groups.len() - 1
        });
        groups[slot].0.push(*fault);
    }
    let classes = groups
        .into_iter()
        .enumerate()
        .map(|(class_id, (members, column))| FaultClass {
            class_id,
            members,
            column: column.clone(),
        })
        .collect();
    (classes, undetectable)
}
