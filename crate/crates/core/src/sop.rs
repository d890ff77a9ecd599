//! Sum-of-products expressions: parsing, rendering and evaluation.
//!
//! Variables are single lowercase letters. The variable list is sorted
//! alphabetically, and the first variable is the most significant bit of a
//! truth-table row number.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, ParseError, Result};

/// Default upper bound on the number of input variables.
pub const DEFAULT_MAX_VARS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Literal {
    pub var_index: usize,
    pub complemented: bool,
}

impl Literal {
    #[inline]
    pub fn eval(&self, bits: &[bool]) -> bool {
        bits[self.var_index] != self.complemented
    }
}

/// One AND gate of the two-level circuit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Term {
    pub literals: Vec<Literal>,
    pub term_index: usize,
}

impl Term {
    pub fn eval(&self, bits: &[bool]) -> bool {
        self.literals.iter().all(|l| l.eval(bits))
    }
}

/// A parsed two-level circuit. Immutable once built.
#[derive(Debug, Clone, Serialize)]
pub struct SopExpr {
    variables: Vec<char>,
    terms: Vec<Term>,
    source_text: String,
}

impl PartialEq for SopExpr {
    // Source text is provenance only; two expressions are the same circuit
    // when their variables and terms agree.
    fn eq(&self, other: &Self) -> bool {
        self.variables == other.variables && self.terms == other.terms
    }
}

impl Eq for SopExpr {}

impl SopExpr {
    pub fn variables(&self) -> &[char] {
        &self.variables
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn source_text(&self) -> &str {
        &self.source_text
    }

    /// Number of input variables.
    pub fn n(&self) -> usize {
        self.variables.len()
    }

    /// Total literal occurrences over all terms.
    pub fn literal_count(&self) -> usize {
        self.terms.iter().map(|t| t.literals.len()).sum()
    }

    /// Number of truth-table rows, `2^n`.
    pub fn row_count(&self) -> usize {
        1usize << self.n()
    }

    pub fn evaluate(&self, v: &InputVector) -> bool {
        debug_assert_eq!(v.bits.len(), self.n());
        self.terms.iter().any(|t| t.eval(&v.bits))
    }

    /// Evaluates the circuit on truth-table row `row`.
    pub fn evaluate_row(&self, row: usize) -> Result<bool> {
        Ok(self.evaluate(&assignment_from_index(row, self.n())?))
    }
}

impl fmt::Display for SopExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, term) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            for lit in &term.literals {
                write!(f, "{}", self.variables[lit.var_index])?;
                if lit.complemented {
                    f.write_str("'")?;
                }
            }
        }
        Ok(())
    }
}

/// An assignment to all `n` inputs, tagged with its truth-table row number.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct InputVector {
    pub bits: Vec<bool>,
    pub row_index: usize,
}

impl InputVector {
    pub fn from_bits(bits: Vec<bool>) -> Self {
        let row_index = bits.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
        InputVector { bits, row_index }
    }
}

impl fmt::Display for InputVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Maps a row number to its input vector, first variable most significant.
pub fn assignment_from_index(row: usize, n: usize) -> Result<InputVector> {
    if n >= usize::BITS as usize || row >= (1usize << n) {
        return Err(Error::RowOutOfRange { row, n });
    }
    let bits = (0..n).map(|i| (row >> (n - 1 - i)) & 1 == 1).collect();
    Ok(InputVector { bits, row_index: row })
}

struct RawTerm {
    // (letter, complemented)
    factors: Vec<(char, bool)>,
}

/// Parses a sum-of-products expression.
///
/// `expression := term ('+' term)*`, `term := factor+`, `factor := [a-z] "'"?`.
/// `*` and `.` may separate factors; whitespace is ignored.
pub fn parse(text: &str, max_vars: usize) -> Result<SopExpr, ParseError> {
    if text.trim().is_empty() {
        return Err(ParseError::EmptyInput);
    }

    let mut raw_terms: Vec<RawTerm> = Vec::new();
    let mut current = RawTerm { factors: Vec::new() };
    let mut term_start = 0usize;
    // true right after an explicit product operator
    let mut pending_operator: Option<(char, usize)> = None;

    let mut chars = text.char_indices().peekable();
    while let Some((offset, ch)) = chars.next() {
        match ch {
            c if c.is_whitespace() => {}
            'a'..='z' => {
                let mut complemented = false;
                // whitespace between a letter and its prime is not allowed
                if let Some(&(_, '\'')) = chars.peek() {
                    chars.next();
                    complemented = true;
                    if let Some(&(off2, '\'')) = chars.peek() {
                        return Err(ParseError::DoubleComplement {
                            var: ch,
                            offset: off2,
                        });
                    }
                }
                current.factors.push((ch, complemented));
                pending_operator = None;
            }
            '*' | '.' => {
                if current.factors.is_empty() || pending_operator.is_some() {
                    return Err(ParseError::InvalidCharacter { ch, offset });
                }
                pending_operator = Some((ch, offset));
            }
            '+' => {
                if let Some((op, off)) = pending_operator {
                    return Err(ParseError::InvalidCharacter { ch: op, offset: off });
                }
                if current.factors.is_empty() {
                    return Err(ParseError::EmptyTerm { offset: term_start });
                }
                raw_terms.push(std::mem::replace(&mut current, RawTerm { factors: Vec::new() }));
                term_start = offset + 1;
            }
            _ => return Err(ParseError::InvalidCharacter { ch, offset }),
        }
    }
    if let Some((op, off)) = pending_operator {
        return Err(ParseError::InvalidCharacter { ch: op, offset: off });
    }
    if current.factors.is_empty() {
        return Err(ParseError::EmptyTerm { offset: term_start });
    }
    raw_terms.push(current);

    let letters: BTreeSet<char> = raw_terms
        .iter()
        .flat_map(|t| t.factors.iter().map(|&(c, _)| c))
        .collect();
    if letters.len() > max_vars {
        return Err(ParseError::TooManyVariables {
            found: letters.len(),
            max: max_vars,
        });
    }
    let variables: Vec<char> = letters.into_iter().collect();
    let index_of = |c: char| variables.binary_search(&c).expect("letter collected above");

    let mut terms = Vec::with_capacity(raw_terms.len());
    for (term_index, raw) in raw_terms.into_iter().enumerate() {
        let mut literals: Vec<Literal> = raw
            .factors
            .iter()
            .map(|&(c, complemented)| Literal {
                var_index: index_of(c),
                complemented,
            })
            .collect();
        literals.sort_by_key(|l| l.var_index);
        if let Some(w) = literals.windows(2).find(|w| w[0].var_index == w[1].var_index) {
            return Err(ParseError::DuplicateVariableInTerm {
                var: variables[w[0].var_index],
                term: term_index,
            });
        }
        terms.push(Term { literals, term_index });
    }

    Ok(SopExpr {
        variables,
        terms,
        source_text: text.to_string(),
    })
}

/// Extracts the expression from `.sop` file contents: `#` lines are
/// comments and the remaining lines are joined.
pub fn sop_file_expression(contents: &str) -> String {
    contents
        .lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Parses the contents of a `.sop` file.
pub fn parse_sop_file(contents: &str, max_vars: usize) -> Result<SopExpr, ParseError> {
    parse(&sop_file_expression(contents), max_vars)
}
