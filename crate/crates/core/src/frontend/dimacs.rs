//! DIMACS CNF reading and writing.
//!
//! Strict mode (the default) rejects literals above the declared variable
//! count, a clause count that differs from the header, and a final clause
//! without its terminating `0`. Lenient mode turns those into warnings and
//! also stops at a SATLIB-style `%` line.

use std::fmt;

use thiserror::Error;

use crate::cnf::{Clause, Formula, Literal};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DimacsErrorKind {
    MissingHeader,
    MalformedHeader(String),
    Token(String),
    Bounds { literal: i64, vars: u64 },
    Count { declared: u64, found: u64 },
    UnterminatedClause,
}

impl fmt::Display for DimacsErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DimacsErrorKind::MissingHeader => write!(f, "missing `p cnf` header"),
            DimacsErrorKind::MalformedHeader(s) => write!(f, "malformed header: {s}"),
            DimacsErrorKind::Token(s) => write!(f, "unexpected token `{s}`"),
            DimacsErrorKind::Bounds { literal, vars } => {
                write!(f, "literal {literal} exceeds declared variable count {vars}")
            }
            DimacsErrorKind::Count { declared, found } => {
                write!(f, "header declares {declared} clauses, found {found}")
            }
            DimacsErrorKind::UnterminatedClause => write!(f, "last clause is not terminated by 0"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct DimacsError {
    pub line: usize,
    pub column: usize,
    pub kind: DimacsErrorKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DimacsOptions {
    pub strict: bool,
}

impl Default for DimacsOptions {
    fn default() -> Self {
        DimacsOptions { strict: true }
    }
}

/// A parsed instance together with its header and any lenient-mode warnings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dimacs {
    pub formula: Formula,
    pub declared_vars: u64,
    pub declared_clauses: u64,
    pub warnings: Vec<DimacsError>,
}

struct Token<'a> {
    text: &'a str,
    line: usize,
    column: usize,
    first_on_line: bool,
}

fn tokens(text: &str) -> impl Iterator<Item = Token<'_>> {
    text.lines().enumerate().flat_map(|(ln, line)| {
        let mut first = true;
        let mut out = Vec::new();
        let mut start = None;
        for (i, ch) in line.char_indices().chain(std::iter::once((line.len(), ' '))) {
            if ch.is_whitespace() {
                if let Some(s) = start.take() {
                    out.push(Token {
                        text: &line[s..i],
                        line: ln + 1,
                        column: s + 1,
                        first_on_line: first,
                    });
                    first = false;
                }
            } else if start.is_none() {
                start = Some(i);
            }
        }
        out
    })
}

pub fn parse_dimacs(text: &[u8]) -> Result<Formula, DimacsError> {
    parse_dimacs_with(text, DimacsOptions::default()).map(|d| d.formula)
}

pub fn parse_dimacs_with(text: &[u8], opts: DimacsOptions) -> Result<Dimacs, DimacsError> {
    let text = std::str::from_utf8(text).map_err(|e| DimacsError {
        line: 1 + text[..e.valid_up_to()].iter().filter(|&&b| b == b'\n').count(),
        column: 1,
        kind: DimacsErrorKind::Token("invalid UTF-8".into()),
    })?;

    let mut header: Option<(u64, u64)> = None;
    let mut warnings = Vec::new();
    let mut clauses = Vec::new();
    let mut current: Vec<Literal> = Vec::new();
    let mut skip_line = None;
    let mut last_pos = (1, 1);

    let mut iter = tokens(text).peekable();
    while let Some(tok) = iter.next() {
        last_pos = (tok.line, tok.column + tok.text.len());
        if skip_line == Some(tok.line) {
            continue;
        }
        let err = |kind| DimacsError {
            line: tok.line,
            column: tok.column,
            kind,
        };
        if tok.first_on_line && tok.text.starts_with('c') {
            skip_line = Some(tok.line);
            continue;
        }
        if tok.first_on_line && tok.text == "p" {
            if header.is_some() {
                return Err(err(DimacsErrorKind::MalformedHeader("duplicate header".into())));
            }
            if !clauses.is_empty() || !current.is_empty() {
                return Err(err(DimacsErrorKind::MalformedHeader(
                    "header after clauses".into(),
                )));
            }
            let mut fields = Vec::new();
            while let Some(t) = iter.next_if(|t| t.line == tok.line) {
                fields.push(t.text);
            }
            let parsed = match fields.as_slice() {
                ["cnf", v, c] => v.parse::<u64>().ok().zip(c.parse::<u64>().ok()),
                _ => None,
            };
            match parsed {
                Some(h) => header = Some(h),
                None => {
                    return Err(err(DimacsErrorKind::MalformedHeader(format!(
                        "expected `p cnf <vars> <clauses>`, got `p {}`",
                        fields.join(" ")
                    ))))
                }
            }
            continue;
        }
        if tok.text == "%" && !opts.strict {
            break;
        }
        let Some((vars, _)) = header else {
            return Err(err(DimacsErrorKind::MissingHeader));
        };
        let value: i64 = tok
            .text
            .parse()
            .map_err(|_| err(DimacsErrorKind::Token(tok.text.to_string())))?;
        if value == 0 {
            clauses.push(Clause::canonicalize(current.drain(..)));
            continue;
        }
        let lit = Literal::from_dimacs(value)
            .ok_or_else(|| err(DimacsErrorKind::Token(tok.text.to_string())))?;
        if value.unsigned_abs() > vars {
            let e = err(DimacsErrorKind::Bounds {
                literal: value,
                vars,
            });
            if opts.strict {
                return Err(e);
            }
            warnings.push(e);
        }
        current.push(lit);
    }

    let at_end = |kind| DimacsError {
        line: last_pos.0,
        column: last_pos.1,
        kind,
    };
    let Some((declared_vars, declared_clauses)) = header else {
        return Err(at_end(DimacsErrorKind::MissingHeader));
    };
    if !current.is_empty() {
        let e = at_end(DimacsErrorKind::UnterminatedClause);
        if opts.strict {
            return Err(e);
        }
        warnings.push(e);
        clauses.push(Clause::canonicalize(current.drain(..)));
    }
    let found = clauses.len() as u64;
    if found != declared_clauses {
        let e = at_end(DimacsErrorKind::Count {
            declared: declared_clauses,
            found,
        });
        if opts.strict {
            return Err(e);
        }
        warnings.push(e);
    }
    Ok(Dimacs {
        formula: Formula::from_clauses(clauses),
        declared_vars,
        declared_clauses,
        warnings,
    })
}

/// Writes `p cnf <max var> <clauses>` followed by one clause per line.
pub fn emit_dimacs(d: &Formula) -> Vec<u8> {
    emit_dimacs_with_comments(d, &[])
}

/// Like [`emit_dimacs`], with `c` comment lines before the header.
pub fn emit_dimacs_with_comments(d: &Formula, comments: &[String]) -> Vec<u8> {
    let mut out = String::new();
    for c in comments {
        out.push_str("c ");
        out.push_str(c);
        out.push('\n');
    }
    out.push_str(&format!("p cnf {} {}\n", d.max_var(), d.len()));
    for c in d {
        for l in c.iter() {
            out.push_str(&l.to_dimacs().to_string());
            out.push(' ');
        }
        out.push_str("0\n");
    }
    out.into_bytes()
}
