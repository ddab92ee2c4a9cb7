//! DIMACS CNF reading and writing.
//!
//! The emitted format is pinned: optional `c ` comment lines first, then the
//! `p cnf <vars> <clauses>` header, then one 0-terminated clause per line
//! with single spaces. The parser is slightly more lenient (comments and
//! blank lines anywhere, clauses spanning lines) and reports errors with the
//! offending line number.

use std::fmt::Write as _;

use thiserror::Error;

use crate::cnf::{Clause, CnfFormula, Literal, Var};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DimacsError {
    #[error("line {line}: malformed header {header:?}, expected \"p cnf <vars> <clauses>\"")]
    MalformedHeader { line: usize, header: String },
    #[error("line {line}: duplicate problem header")]
    DuplicateHeader { line: usize },
    #[error("line {line}: clause data before the problem header")]
    ClauseBeforeHeader { line: usize },
    #[error("line {line}: token {token:?} is not an integer")]
    BadToken { line: usize, token: String },
    #[error("line {line}: literal {literal} is out of range for {num_vars} variables")]
    LiteralOutOfRange {
        line: usize,
        literal: i64,
        num_vars: u32,
    },
    #[error("line {line}: clause contains variable x{var} twice")]
    DuplicateVariable { line: usize, var: u32 },
    #[error("line {line}: end of input inside a clause, missing 0 terminator")]
    MissingTerminator { line: usize },
    #[error("header promises {expected} clauses but the file has {found}")]
    ClauseCountMismatch { expected: usize, found: usize },
    #[error("missing problem header")]
    MissingHeader,
}

/// Parses DIMACS CNF text, discarding comments.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula, DimacsError> {
    parse_dimacs_with_comments(text).map(|(f, _)| f)
}

/// Parses DIMACS CNF text, returning the comment lines (without the leading
/// `c`) alongside the formula. Generator metadata lives in these comments.
pub fn parse_dimacs_with_comments(
    text: &str,
) -> Result<(CnfFormula, Vec<String>), DimacsError> {
    let mut header: Option<(u32, usize)> = None;
    let mut comments = Vec::new();
    let mut clauses: Vec<Clause> = Vec::new();
    let mut current: Vec<Literal> = Vec::new();
    let mut in_clause = false;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if trimmed == "c" || trimmed.starts_with("c ") || trimmed.starts_with("c\t") {
            comments.push(trimmed[1..].trim_start().to_string());
            continue;
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(DimacsError::DuplicateHeader { line });
            }
            let parts: Vec<&str> = trimmed.split_whitespace().collect();
            let parsed = match parts.as_slice() {
                ["p", "cnf", vars, clauses] => vars
                    .parse::<u32>()
                    .ok()
                    .zip(clauses.parse::<usize>().ok()),
                _ => None,
            };
            match parsed {
                Some((num_vars, num_clauses)) => header = Some((num_vars, num_clauses)),
                None => {
                    return Err(DimacsError::MalformedHeader {
                        line,
                        header: trimmed.to_string(),
                    })
                }
            }
            continue;
        }
        let (num_vars, _) = header.ok_or(DimacsError::ClauseBeforeHeader { line })?;
        for token in trimmed.split_whitespace() {
            let value: i64 = token.parse().map_err(|_| DimacsError::BadToken {
                line,
                token: token.to_string(),
            })?;
            if value == 0 {
                let clause = Clause::new(std::mem::take(&mut current)).map_err(|e| match e {
                    crate::cnf::CnfError::DuplicateVariable(var) => {
                        DimacsError::DuplicateVariable { line, var }
                    }
                    _ => unreachable!("clause construction only fails on duplicates"),
                })?;
                clauses.push(clause);
                in_clause = false;
                continue;
            }
            let magnitude = value.unsigned_abs();
            if magnitude > u64::from(num_vars) {
                return Err(DimacsError::LiteralOutOfRange {
                    line,
                    literal: value,
                    num_vars,
                });
            }
            current.push(Literal::new(Var::new(magnitude as u32), value > 0));
            in_clause = true;
        }
    }

    if in_clause || !current.is_empty() {
        return Err(DimacsError::MissingTerminator { line: last_line });
    }
    let (num_vars, expected) = header.ok_or(DimacsError::MissingHeader)?;
    if clauses.len() != expected {
        return Err(DimacsError::ClauseCountMismatch {
            expected,
            found: clauses.len(),
        });
    }
    let formula =
        CnfFormula::new(num_vars, clauses).expect("literal range already validated");
    Ok((formula, comments))
}

/// Serializes a formula in the pinned DIMACS format.
pub fn emit_dimacs(f: &CnfFormula) -> String {
    emit_dimacs_with_comments(f, &[])
}

pub fn emit_dimacs_with_comments(f: &CnfFormula, comments: &[String]) -> String {
    let mut out = String::new();
    for comment in comments {
        if comment.is_empty() {
            out.push_str("c\n");
        } else {
            writeln!(out, "c {comment}").unwrap();
        }
    }
    writeln!(out, "p cnf {} {}", f.num_vars(), f.num_clauses()).unwrap();
    for clause in f.clauses() {
        for lit in clause.literals() {
            write!(out, "{} ", lit.to_dimacs()).unwrap();
        }
        out.push_str("0\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_simple_formula() {
        let f = parse_dimacs("p cnf 2 1\n1 -2 0\n").unwrap();
        assert_eq!(f.num_vars(), 2);
        assert_eq!(f.num_clauses(), 1);
        let clause = &f.clauses()[0];
        assert_eq!(clause.polarity_of(Var::new(1)), Some(true));
        assert_eq!(clause.polarity_of(Var::new(2)), Some(false));
    }

    #[test]
    fn literal_out_of_range_reports_line() {
        let err = parse_dimacs("p cnf 1 1\n2 0\n").unwrap_err();
        assert_eq!(
            err,
            DimacsError::LiteralOutOfRange {
                line: 2,
                literal: 2,
                num_vars: 1
            }
        );
    }

    #[test]
    fn missing_terminator_reports_line() {
        let err = parse_dimacs("p cnf 2 1\n1 -2\n").unwrap_err();
        assert_eq!(err, DimacsError::MissingTerminator { line: 2 });
    }

    #[test]
    fn malformed_header_reports_line() {
        let err = parse_dimacs("p cnf two 1\n1 0\n").unwrap_err();
        assert!(matches!(err, DimacsError::MalformedHeader { line: 1, .. }));
    }

    #[test]
    fn clause_count_mismatch() {
        let err = parse_dimacs("p cnf 2 2\n1 0\n").unwrap_err();
        assert_eq!(
            err,
            DimacsError::ClauseCountMismatch {
                expected: 2,
                found: 1
            }
        );
    }

    #[test]
    fn comments_survive_round_trip() {
        let text = "c seed=7\nc edge 0 = (1,2)\np cnf 1 1\n-1 0\n";
        let (f, comments) = parse_dimacs_with_comments(text).unwrap();
        assert_eq!(comments, vec!["seed=7", "edge 0 = (1,2)"]);
        assert_eq!(emit_dimacs_with_comments(&f, &comments), text);
    }

    #[test]
    fn empty_clause_round_trips() {
        let text = "p cnf 1 1\n0\n";
        let f = parse_dimacs(text).unwrap();
        assert!(f.has_empty_clause());
        assert_eq!(emit_dimacs(&f), text);
    }
}
