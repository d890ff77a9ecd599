//! Independent brute-force reference used by the integration tests.
//!
//! Circuits are plain nested vectors and every fault is simulated by
//! rewriting the circuit and evaluating it row by row. Nothing here calls
//! into the library's fault or table code.
#![allow(dead_code)]

use proptest::prelude::*;
use sopfault::{SopExpr, DEFAULT_MAX_VARS};

/// `terms[t][i] = (variable, complemented)`.
/// Member fault indices and the shared output column.
pub type NaiveClass = (Vec<usize>, Vec<bool>);

#[derive(Debug, Clone)]
pub struct NaiveCircuit {
    pub n: usize,
    pub terms: Vec<Vec<(usize, bool)>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NaiveSite {
    Literal(usize, usize),
    Term(usize),
    Output,
}

impl NaiveCircuit {
    pub fn from_expr(e: &SopExpr) -> Self {
        NaiveCircuit {
            n: e.variables().len(),
            terms: e
                .terms()
                .iter()
                .map(|t| t.literals.iter().map(|l| (l.var_index, l.complemented)).collect())
                .collect(),
        }
    }

    fn input(&self, row: usize, var: usize) -> bool {
        // first variable is the most significant bit
        row & (1 << (self.n - 1 - var)) != 0
    }

    pub fn eval(&self, row: usize, fault: Option<(NaiveSite, bool)>) -> bool {
        if let Some((NaiveSite::Output, v)) = fault {
            return v;
        }
        let mut out = false;
        for (t, term) in self.terms.iter().enumerate() {
            let mut and = true;
            for (i, &(var, neg)) in term.iter().enumerate() {
                let mut x = self.input(row, var) ^ neg;
                if fault == Some((NaiveSite::Literal(t, i), false)) {
                    x = false;
                }
                if fault == Some((NaiveSite::Literal(t, i), true)) {
                    x = true;
                }
                and = and && x;
            }
            if let Some((NaiveSite::Term(ft), v)) = fault {
                if ft == t {
                    and = v;
                }
            }
            out = out || and;
        }
        out
    }

    pub fn faults(&self) -> Vec<(NaiveSite, bool)> {
        let mut sites = Vec::new();
        for (t, term) in self.terms.iter().enumerate() {
            for i in 0..term.len() {
                sites.push(NaiveSite::Literal(t, i));
            }
        }
        for t in 0..self.terms.len() {
            sites.push(NaiveSite::Term(t));
        }
        sites.push(NaiveSite::Output);
        sites.into_iter().flat_map(|s| [(s, false), (s, true)]).collect()
    }

    pub fn column(&self, fault: Option<(NaiveSite, bool)>) -> Vec<bool> {
        (0..1usize << self.n).map(|r| self.eval(r, fault)).collect()
    }

    /// Detectable fault groups (by fault index) in first-occurrence order,
    /// and the undetectable fault indices.
    pub fn classes(&self) -> (Vec<NaiveClass>, Vec<usize>) {
        let z = self.column(None);
        let mut classes: Vec<NaiveClass> = Vec::new();
        let mut undetectable = Vec::new();
        for (id, f) in self.faults().into_iter().enumerate() {
            let col = self.column(Some(f));
            if col == z {
                undetectable.push(id);
            } else if let Some(c) = classes.iter_mut().find(|c| c.1 == col) {
                c.0.push(id);
            } else {
                classes.push((vec![id], col));
            }
        }
        (classes, undetectable)
    }

    /// Detection matrix over all rows: `[row][column]`, column 0 fault-free.
    pub fn detection(&self) -> Vec<Vec<bool>> {
        let z = self.column(None);
        let (classes, _) = self.classes();
        (0..z.len())
            .map(|r| {
                std::iter::once(false)
                    .chain(classes.iter().map(|(_, col)| col[r] != z[r]))
                    .collect()
            })
            .collect()
    }
}

/// Smallest number of rows of `matrix` (rows x columns) that leaves all
/// columns pairwise distinct, by trying every subset of rows.
pub fn brute_min_distinguishing(matrix: &[Vec<bool>]) -> usize {
    let rows = matrix.len();
    assert!(rows <= 20);
    let cols = matrix.first().map_or(0, |r| r.len());
    let mut best = usize::MAX;
    for mask in 0u32..(1 << rows) {
        let size = mask.count_ones() as usize;
        if size >= best {
            continue;
        }
        let sig = |c: usize| -> Vec<bool> {
            (0..rows)
                .filter(|r| mask & (1 << r) != 0)
                .map(|r| matrix[r][c])
                .collect()
        };
        let sigs: std::collections::HashSet<Vec<bool>> = (0..cols).map(sig).collect();
        if sigs.len() == cols {
            best = size;
        }
    }
    best
}

/// Random valid SOP text over up to `max_vars` variables.
pub fn expr_strategy(max_vars: usize, max_terms: usize) -> impl Strategy<Value = String> {
    (1..=max_vars).prop_flat_map(move |n| {
        prop::collection::vec(
            prop::collection::btree_map(0..n, any::<bool>(), 1..=n.min(4)),
            1..=max_terms,
        )
        .prop_map(|terms| {
            terms
                .iter()
                .map(|t| {
                    t.iter()
                        .map(|(&v, &neg)| {
                            let c = (b'a' + v as u8) as char;
                            if neg {
                                format!("{c}'")
                            } else {
                                c.to_string()
                            }
                        })
                        .collect::<String>()
                })
                .collect::<Vec<_>>()
                .join(" + ")
        })
    })
}

pub fn parse(text: &str) -> SopExpr {
    sopfault::parse(text, DEFAULT_MAX_VARS).unwrap()
}
