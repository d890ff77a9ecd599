//! Stuck-at fault analysis and diagnostic test minimization for two-level
//! sum-of-products circuits.
//!
//! The pipeline parses an expression, enumerates every single stuck-at
//! fault, collapses faults with identical output columns, builds the fault
//! dictionary and detection table, and grows an adaptive diagnosing tree
//! whose tests are then pruned to an inclusion-minimal distinguishing set.
//!
//! ```
//! use sopfault::{analyze, parse, Options};
//!
//! let expr = parse("ab + c", 20).unwrap();
//! let analysis = analyze(&expr, &Options::default()).unwrap();
//! assert_eq!(analysis.classes.len(), 6);
//! assert_eq!(analysis.leaf_count(), 7);
//! ```

pub mod analysis;
pub mod error;
pub mod fault;
pub mod generate;
pub mod oracle;
pub mod sop;
pub mod table;
pub mod tree;

pub use analysis::{analyze, Analysis, Options, Step, Transcript};
pub use error::{Error, ParseError, Result};
pub use fault::{
    collapse, enumerate_faults, fault_column, fault_free_column, faulty_evaluate, CircuitTables, Column,
    Fault, FaultClass, FaultSite, UndetectableReport,
};
pub use generate::{generate, GenParams};
pub use oracle::{is_distinguishing, minimal_detection_set, minimal_distinguishing_set, OracleLimits};
pub use sop::{
    assignment_from_index, parse, parse_sop_file, InputVector, Literal, SopExpr, Term, DEFAULT_MAX_VARS,
};
pub use table::{
    build_dictionary, class_column, column_class, dedup, detection_matrix, FaultDictionary, FaultTable,
    DEFAULT_ROW_CAP, FAULT_FREE,
};
pub use tree::{
    build_tree, eliminate_redundant, format_percentage, min_levels, minimization_report, row_score,
    select_row, DiagnosingTree, Diagnosis, EssentialTestSet, MinimizationReport, Node, RowScore,
};
