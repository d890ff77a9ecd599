//! JSON shapes emitted by the subcommands. Field order is part of the
//! output format; schemas for each live in `schemas/`.

use serde::Serialize;
use sopfault::{Analysis, FaultClass, FaultDictionary, FaultTable, MinimizationReport, Transcript};

#[derive(Serialize)]
pub struct DictView {
    pub expression: String,
    pub n: usize,
    pub variables: Vec<String>,
    pub class_count: usize,
    pub rows: Vec<DictRowView>,
    pub row_groups: Vec<RowGroupView>,
    pub column_groups: Vec<Vec<usize>>,
}

#[derive(Serialize)]
pub struct DictRowView {
    pub row: usize,
    pub inputs: String,
    pub z: u8,
    pub faults: Vec<u8>,
}

#[derive(Serialize)]
pub struct RowGroupView {
    pub test: usize,
    pub rows: Vec<usize>,
}

impl DictView {
    pub fn new(a: &Analysis) -> Self {
        DictView {
            expression: a.expr.to_string(),
            n: a.expr.n(),
            variables: a.expr.variables().iter().map(char::to_string).collect(),
            class_count: a.classes.len(),
            rows: dict_rows(&a.dictionary),
            row_groups: row_groups(&a.table),
            column_groups: a.table.column_groups().to_vec(),
        }
    }
}

fn dict_rows(dict: &FaultDictionary) -> Vec<DictRowView> {
    dict.rows()
        .map(|r| DictRowView {
            row: r.inputs.row_index,
            inputs: r.inputs.to_string(),
            z: r.z as u8,
            faults: r.faults.iter().map(|&b| b as u8).collect(),
        })
        .collect()
}

fn row_groups(table: &FaultTable) -> Vec<RowGroupView> {
    table
        .tests()
        .iter()
        .zip(table.row_groups())
        .map(|(&test, rows)| RowGroupView {
            test,
            rows: rows.clone(),
        })
        .collect()
}

#[derive(Serialize)]
pub struct ClassView {
    pub class_id: usize,
    pub representative: usize,
    pub fault_ids: Vec<usize>,
    pub members: Vec<String>,
}

impl ClassView {
    pub fn new(c: &FaultClass) -> Self {
        ClassView {
            class_id: c.class_id,
            representative: c.representative().fault_id,
            fault_ids: c.members.iter().map(|f| f.fault_id).collect(),
            members: c.members.iter().map(|f| f.to_string()).collect(),
        }
    }
}

#[derive(Serialize)]
pub struct FaultsView {
    pub expression: String,
    pub fault_count: usize,
    pub classes: Vec<ClassView>,
    pub undetectable: Vec<FaultRef>,
}

#[derive(Serialize)]
pub struct FaultRef {
    pub fault_id: usize,
    pub fault: String,
}

impl FaultsView {
    pub fn new(a: &Analysis) -> Self {
        FaultsView {
            expression: a.expr.to_string(),
            fault_count: a.faults.len(),
            classes: a.classes.iter().map(ClassView::new).collect(),
            undetectable: a
                .undetectable
                .faults
                .iter()
                .map(|f| FaultRef {
                    fault_id: f.fault_id,
                    fault: f.to_string(),
                })
                .collect(),
        }
    }
}

#[derive(Serialize)]
pub struct ReportView {
    pub n: usize,
    pub a: usize,
    pub fault_count_raw: usize,
    pub class_count: usize,
    pub b: usize,
    pub percentage: f64,
    pub percentage_display: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_seconds: Option<f64>,
}

impl ReportView {
    pub fn new(r: &MinimizationReport, timing: bool) -> Self {
        ReportView {
            n: r.n,
            a: r.a,
            fault_count_raw: r.fault_count_raw,
            class_count: r.class_count,
            b: r.b,
            percentage: r.percentage,
            percentage_display: r.percentage_display(),
            elapsed_seconds: timing.then_some(r.elapsed_seconds),
        }
    }
}

#[derive(Serialize)]
pub struct TestView {
    pub test: usize,
    pub inputs: String,
}

#[derive(Serialize)]
pub struct MinimizeView {
    pub expression: String,
    pub report: ReportView,
    pub undetectable_count: usize,
    pub tree_depth: usize,
    pub min_levels: usize,
    pub selected: Vec<usize>,
    #[serde(rename = "final")]
    pub final_tests: Vec<TestView>,
}

impl MinimizeView {
    pub fn new(a: &Analysis, timing: bool) -> Self {
        let n = a.expr.n();
        MinimizeView {
            expression: a.expr.to_string(),
            report: ReportView::new(&a.report, timing),
            undetectable_count: a.undetectable.faults.len(),
            tree_depth: a.tree.depth(),
            min_levels: a.tree.min_levels(),
            selected: a.tests.selected.clone(),
            final_tests: a
                .tests
                .final_tests
                .iter()
                .map(|&t| TestView {
                    test: t,
                    inputs: format!("{t:0n$b}"),
                })
                .collect(),
        }
    }
}

#[derive(Serialize)]
pub struct StepView {
    pub test: usize,
    pub inputs: String,
    pub expected: u8,
    pub observed: u8,
    pub detected: u8,
}

#[derive(Serialize)]
pub struct SimulateView {
    pub expression: String,
    pub injected: Option<FaultRef>,
    pub steps: Vec<StepView>,
    pub diagnosis: String,
    pub diagnosed_members: Vec<String>,
    pub consistent: bool,
}

impl SimulateView {
    pub fn new(a: &Analysis, t: &Transcript) -> Self {
        let diagnosis = t.diagnosis.to_string();
        let diagnosed_members = match t.diagnosis {
            sopfault::Diagnosis::Class(k) => a.classes[k].members.iter().map(|f| f.to_string()).collect(),
            sopfault::Diagnosis::FaultFree => Vec::new(),
        };
        SimulateView {
            expression: a.expr.to_string(),
            injected: t.injected.map(|f| FaultRef {
                fault_id: f.fault_id,
                fault: f.to_string(),
            }),
            steps: t
                .steps
                .iter()
                .map(|s| StepView {
                    test: s.test,
                    inputs: s.inputs.to_string(),
                    expected: s.expected as u8,
                    observed: s.observed as u8,
                    detected: s.detected as u8,
                })
                .collect(),
            diagnosis,
            diagnosed_members,
            consistent: t.consistent,
        }
    }
}

#[derive(Serialize)]
pub struct VerifyView {
    pub expression: String,
    pub class_count: usize,
    pub table_rows: usize,
    pub heuristic_tests: Vec<usize>,
    pub oracle_tests: Vec<usize>,
    pub heuristic_size: usize,
    pub oracle_size: usize,
    pub gap: i64,
    pub heuristic_valid: bool,
    pub heuristic_minimal: bool,
    pub oracle_valid: bool,
}
