//! The full minimization pipeline and fault-injection walks of its tree.

use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fault::{collapse, enumerate_faults, faulty_evaluate, Fault, FaultClass, UndetectableReport};
use crate::sop::{assignment_from_index, InputVector, SopExpr};
use crate::table::{build_dictionary, dedup, detection_matrix, FaultDictionary, FaultTable, DEFAULT_ROW_CAP};
use crate::tree::{
    build_tree, eliminate_redundant, minimization_report, DiagnosingTree, Diagnosis, EssentialTestSet,
    MinimizationReport, Node,
};

#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub row_cap: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            row_cap: DEFAULT_ROW_CAP,
        }
    }
}

/// Everything the pipeline produces for one circuit.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub expr: SopExpr,
    pub faults: Vec<Fault>,
    pub classes: Vec<FaultClass>,
    pub undetectable: UndetectableReport,
    pub dictionary: FaultDictionary,
    /// Deduplicated fault table.
    pub table: FaultTable,
    pub tree: DiagnosingTree,
    /// Table positions of tests used by the tree, in first-use order.
    pub selected_positions: Vec<usize>,
    /// Table positions surviving redundancy elimination.
    pub final_positions: Vec<usize>,
    pub tests: EssentialTestSet,
    pub report: MinimizationReport,
}

/// Runs fault enumeration through redundancy elimination. The reported
/// elapsed time covers exactly this work.
pub fn analyze(expr: &SopExpr, options: &Options) -> Result<Analysis> {
    let start = Instant::now();
    let faults = enumerate_faults(expr);
    let (classes, undetectable) = collapse(expr, &faults);
    let dictionary = build_dictionary(expr, &classes, options.row_cap)?;
    let table = dedup(&detection_matrix(&dictionary))?;
    let (tree, selected_positions) = build_tree(&table)?;
    let final_positions = eliminate_redundant(&selected_positions, &table)?;
    let tests = EssentialTestSet::from_positions(&table, &selected_positions, &final_positions);
    let elapsed = start.elapsed().as_secs_f64();
    let report = minimization_report(
        expr.n(),
        faults.len(),
        classes.len(),
        final_positions.len(),
        elapsed,
    );
    Ok(Analysis {
        expr: expr.clone(),
        faults,
        classes,
        undetectable,
        dictionary,
        table,
        tree,
        selected_positions,
        final_positions,
        tests,
        report,
    })
}

impl Analysis {
    /// Class containing `fault_id`, if the fault is detectable.
    pub fn class_of(&self, fault_id: usize) -> Option<&FaultClass> {
        self.classes.iter().find(|c| c.contains(fault_id))
    }

    /// Applies the tree's tests to the circuit with `injected` present
    /// (or fault-free for `None`) and reports the diagnosis.
    pub fn simulate(&self, injected: Option<usize>) -> Result<Transcript> {
        let fault = match injected {
            None => None,
            Some(id) => Some(*self.faults.get(id).ok_or(Error::UnknownFaultId(id))?),
        };
        let n = self.expr.n();
        let mut steps = Vec::new();
        let (path, leaf) = self.tree.diagnose(|pos| {
            let test = self.table.tests()[pos];
            let v = assignment_from_index(test, n).expect("test row in range");
            let expected = self.expr.evaluate(&v);
            let observed = match &fault {
                Some(f) => faulty_evaluate(&self.expr, f, &v),
                None => expected,
            };
            let detected = expected != observed;
            steps.push(Step {
                test,
                inputs: v,
                expected,
                observed,
                detected,
            });
            detected
        });
        debug_assert_eq!(path.len(), steps.len());
        let diagnosis = Diagnosis::from_column(leaf);
        let consistent = match (fault, diagnosis) {
            (None, Diagnosis::FaultFree) => true,
            (None, Diagnosis::Class(_)) => false,
            (Some(f), Diagnosis::Class(k)) => self.classes[k].contains(f.fault_id),
            (Some(f), Diagnosis::FaultFree) => self.undetectable.faults.contains(&f),
        };
        Ok(Transcript {
            injected: fault,
            steps,
            diagnosis,
            consistent,
        })
    }

    /// Number of leaves in the diagnosing tree.
    pub fn leaf_count(&self) -> usize {
        self.tree
            .nodes()
            .iter()
            .filter(|n| matches!(n, Node::Leaf { .. }))
            .count()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Step {
    pub test: usize,
    pub inputs: InputVector,
    pub expected: bool,
    pub observed: bool,
    pub detected: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Transcript {
    pub injected: Option<Fault>,
    pub steps: Vec<Step>,
    pub diagnosis: Diagnosis,
    /// The diagnosis names the injected fault's class, or fault-free for
    /// no fault or an undetectable one.
    pub consistent: bool,
}
