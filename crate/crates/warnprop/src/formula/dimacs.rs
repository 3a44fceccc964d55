//! DIMACS CNF reading and writing.
//!
//! Accepted input: optional `c` comment lines, a `p cnf <n> <m>` header,
//! then whitespace-separated signed literals with `0` terminating each
//! clause (clauses may span lines). [`write`] emits the canonical form this
//! parser round-trips: header, one clause per line, single spaces, trailing
//! newline.

use thiserror::Error;

use super::{Clause, Formula, FormulaError, Literal, Variable};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DimacsError {
    #[error("missing `p cnf` header")]
    MissingHeader,
    #[error("malformed header line: {0:?}")]
    MalformedHeader(String),
    #[error("unexpected token {0:?}")]
    BadToken(String),
    #[error("literal {literal} out of range (n = {n})")]
    LiteralOutOfRange { literal: i64, n: u32 },
    #[error("unterminated clause at end of input")]
    UnterminatedClause,
    #[error("header declares {declared} clauses, found {found}")]
    ClauseCountMismatch { declared: usize, found: usize },
    #[error("invalid clause: {0}")]
    Clause(#[from] FormulaError),
}

pub fn parse(text: &str) -> Result<Formula, DimacsError> {
    let mut lines = text.lines();
    let (n, m) = loop {
        let line = lines.next().ok_or(DimacsError::MissingHeader)?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('p') {
            let fields: Vec<&str> = rest.split_whitespace().collect();
            let parsed = match fields.as_slice() {
                ["cnf", n, m] => n
                    .parse::<u32>()
                    .ok()
                    .and_then(|n| m.parse::<usize>().ok().map(|m| (n, m))),
                _ => None,
            };
            break parsed.ok_or_else(|| DimacsError::MalformedHeader(line.to_string()))?;
        }
        return Err(DimacsError::MissingHeader);
    };

    let mut clauses = Vec::with_capacity(m);
    let mut current: Vec<Literal> = Vec::new();
    for line in lines {
        let trimmed = line.trim();
        if trimmed.starts_with('c') {
            continue;
        }
        for tok in trimmed.split_whitespace() {
            let lit: i64 = tok
                .parse()
                .map_err(|_| DimacsError::BadToken(tok.to_string()))?;
            if lit == 0 {
                clauses.push(Clause::new(std::mem::take(&mut current))?);
                continue;
            }
            let var = lit.unsigned_abs();
            if var == 0 || var > n as u64 {
                return Err(DimacsError::LiteralOutOfRange { literal: lit, n });
            }
            current.push(Literal {
                var: Variable::new(var as u32),
                positive: lit > 0,
            });
        }
    }
    if !current.is_empty() {
        return Err(DimacsError::UnterminatedClause);
    }
    if clauses.len() != m {
        return Err(DimacsError::ClauseCountMismatch { declared: m, found: clauses.len() });
    }
    Ok(Formula::new(n, clauses)?)
}

pub fn write(formula: &Formula) -> String {
    let mut out = String::new();
    out.push_str(&format!("p cnf {} {}\n", formula.n(), formula.len()));
    for clause in formula.clauses() {
        for lit in clause.literals() {
            let signed = lit.var.number() as i64 * if lit.positive { 1 } else { -1 };
            out.push_str(&signed.to_string());
            out.push(' ');
        }
        out.push_str("0\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_simple_clause() {
        let f = parse("p cnf 3 1\n1 -2 3 0\n").unwrap();
        assert_eq!(f.n(), 3);
        assert_eq!(f.len(), 1);
        let lits = f.clause(0).literals();
        assert_eq!(lits[0], Literal::pos(Variable::new(1)));
        assert_eq!(lits[1], Literal::neg(Variable::new(2)));
        assert_eq!(lits[2], Literal::pos(Variable::new(3)));
    }

    #[test]
    fn skips_comments_and_blank_lines() {
        let f = parse("c a comment\n\np cnf 2 2\nc mid\n1 2 0\n-1 0\n").unwrap();
        assert_eq!(f.len(), 2);
    }

    #[test]
    fn clause_may_span_lines() {
        let f = parse("p cnf 3 1\n1\n-2\n3 0\n").unwrap();
        assert_eq!(f.clause(0).width(), 3);
    }

    #[test]
    fn duplicate_variable_is_rejected() {
        assert_eq!(
            parse("p cnf 2 1\n1 1 0\n"),
            Err(DimacsError::Clause(FormulaError::DuplicateVariable(1)))
        );
    }

    #[test]
    fn out_of_range_literal_is_rejected() {
        assert_eq!(
            parse("p cnf 2 1\n1 -5 0\n"),
            Err(DimacsError::LiteralOutOfRange { literal: -5, n: 2 })
        );
    }

    #[test]
    fn malformed_header_is_rejected() {
        assert!(matches!(parse("p dnf 2 1\n1 0\n"), Err(DimacsError::MalformedHeader(_))));
        assert!(matches!(parse("1 0\n"), Err(DimacsError::MissingHeader)));
    }

    #[test]
    fn unterminated_clause_is_rejected() {
        assert_eq!(parse("p cnf 2 1\n1 2\n"), Err(DimacsError::UnterminatedClause));
    }

    #[test]
    fn clause_count_must_match_header() {
        assert_eq!(
            parse("p cnf 2 2\n1 0\n"),
            Err(DimacsError::ClauseCountMismatch { declared: 2, found: 1 })
        );
    }

    #[test]
    fn write_then_parse_is_identity() {
        let text = "p cnf 4 3\n1 -2 3 0\n-3 4 0\n2 0\n";
        let f = parse(text).unwrap();
        assert_eq!(write(&f), text);
        assert_eq!(parse(&write(&f)).unwrap(), f);
    }
}
