use thiserror::Error;

/// Errors produced while parsing an SOP expression.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty input")]
    EmptyInput,
    #[error("empty term at offset {offset}")]
    EmptyTerm { offset: usize },
    #[error("invalid character {ch:?} at offset {offset}")]
    InvalidCharacter { ch: char, offset: usize },
    #[error("double complement on variable '{var}' at offset {offset}")]
    DoubleComplement { var: char, offset: usize },
    #[error("variable '{var}' appears more than once in term {term}")]
    DuplicateVariableInTerm { var: char, term: usize },
    #[error("expression uses {found} variables, limit is {max}")]
    TooManyVariables { found: usize, max: usize },
}

/// Errors produced by the fault-analysis pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("row {row} out of range for {n} variables")]
    RowOutOfRange { row: usize, n: usize },
    #[error("dictionary needs 2^{n} rows, cap is {cap}")]
    DimensionOverflow { n: usize, cap: usize },
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("no remaining test splits the active column set {columns:?}")]
    NoSplittingRow { columns: Vec<usize> },
    #[error("test set does not distinguish all columns")]
    NotDistinguishing,
    #[error("oracle limit exceeded: {what} is {value}, limit {limit}")]
    LimitExceeded {
        what: &'static str,
        value: usize,
        limit: usize,
    },
    #[error("no test set satisfies the predicate")]
    Infeasible,
    #[error("unknown fault id {0}")]
    UnknownFaultId(usize),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
