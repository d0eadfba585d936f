//! Text formats for both proof systems.
//!
//! DPLL derivations are s-expressions:
//!
//! ```text
//! node   := "conflict"
//!         | "(unit" lit node ")"
//!         | "(elim" clause lit node ")"
//!         | "(red" clause lit node ")"
//!         | "(split" lit node node ")"
//! clause := "[" lit* "]"
//! lit    := nonzero signed decimal
//! ```
//!
//! Resolution derivations are line-oriented traces, one node per line in
//! post-order with ids from 1, the root last:
//!
//! ```text
//! <id> S <premise> <lits> 0
//! <id> R <pivot> <left id> <right id> <lits> 0
//! ```
//!
//! where `<lits>` is the node's conclusion.

use std::fmt::Write as _;

use thiserror::Error;

use crate::cnf::{Clause, Literal};
use crate::dpll_proof::DpllDerivation;
use crate::resolution::ResDerivation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{location}: {message}")]
pub struct ProofParseError {
    /// `offset N` for DPLL text, `line N` for resolution traces.
    pub location: String,
    pub message: String,
}

fn clause_text(out: &mut String, c: &Clause) {
    out.push('[');
    for l in c.iter() {
        let _ = write!(out, " {l}");
    }
    out.push_str(" ]");
}

pub fn serialize_dpll(p: &DpllDerivation) -> String {
    fn go(out: &mut String, p: &DpllDerivation) {
        match p {
            DpllDerivation::Conflict => out.push_str("conflict"),
            DpllDerivation::Unit { lit, sub } => {
                let _ = write!(out, "(unit {lit} ");
                go(out, sub);
                out.push(')');
            }
            DpllDerivation::Elim { clause, lit, sub } | DpllDerivation::Red { clause, lit, sub } => {
                let _ = write!(out, "({} ", p.rule_name());
                clause_text(out, clause);
                let _ = write!(out, " {lit} ");
                go(out, sub);
                out.push(')');
            }
            DpllDerivation::Split { lit, left, right } => {
                let _ = write!(out, "(split {lit} ");
                go(out, left);
                out.push(' ');
                go(out, right);
                out.push(')');
            }
        }
    }
    let mut out = String::new();
    go(&mut out, p);
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tok<'a> {
    Open(&'a str),
    Close,
    LBracket,
    RBracket,
    Word(&'a str),
}

struct Lexer<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn error(&self, at: usize, message: impl Into<String>) -> ProofParseError {
        ProofParseError {
            location: format!("offset {at}"),
            message: message.into(),
        }
    }

    fn next(&mut self) -> Option<(usize, Tok<'a>)> {
        let bytes = self.text.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        let b = *bytes.get(start)?;
        let delimiter = |b: u8| b.is_ascii_whitespace() || b"()[]".contains(&b);
        let word_end = |from: usize| {
            let mut i = from;
            while i < bytes.len() && !delimiter(bytes[i]) {
                i += 1;
            }
            i
        };
        let tok = match b {
            b'(' => {
                let end = word_end(start + 1);
                self.pos = end;
                Tok::Open(&self.text[start + 1..end])
            }
            b')' => {
                self.pos += 1;
                Tok::Close
            }
            b'[' => {
                self.pos += 1;
                Tok::LBracket
            }
            b']' => {
                self.pos += 1;
                Tok::RBracket
            }
            _ => {
                let end = word_end(start);
                self.pos = end;
                Tok::Word(&self.text[start..end])
            }
        };
        Some((start, tok))
    }

    fn expect_next(&mut self) -> Result<(usize, Tok<'a>), ProofParseError> {
        let at = self.text.len();
        self.next().ok_or_else(|| self.error(at, "unexpected end of input"))
    }

    fn literal(&mut self) -> Result<Literal, ProofParseError> {
        match self.expect_next()? {
            (at, Tok::Word(w)) => w
                .parse::<i64>()
                .ok()
                .and_then(Literal::from_dimacs)
                .ok_or_else(|| self.error(at, format!("expected literal, found `{w}`"))),
            (at, t) => Err(self.error(at, format!("expected literal, found {t:?}"))),
        }
    }

    fn clause(&mut self) -> Result<Clause, ProofParseError> {
        match self.expect_next()? {
            (_, Tok::LBracket) => {}
            (at, t) => return Err(self.error(at, format!("expected `[`, found {t:?}"))),
        }
        let mut lits = Vec::new();
        loop {
            let save = self.pos;
            match self.expect_next()? {
                (_, Tok::RBracket) => return Ok(Clause::canonicalize(lits)),
                _ => {
                    self.pos = save;
                    lits.push(self.literal()?);
                }
            }
        }
    }

    fn close(&mut self) -> Result<(), ProofParseError> {
        match self.expect_next()? {
            (_, Tok::Close) => Ok(()),
            (at, t) => Err(self.error(at, format!("expected `)`, found {t:?}"))),
        }
    }

    fn node(&mut self) -> Result<DpllDerivation, ProofParseError> {
        let (at, tok) = self.expect_next()?;
        let node = match tok {
            Tok::Word("conflict") => return Ok(DpllDerivation::Conflict),
            Tok::Open("unit") => {
                let lit = self.literal()?;
                DpllDerivation::unit(lit, self.node()?)
            }
            Tok::Open("elim") => {
                let clause = self.clause()?;
                let lit = self.literal()?;
                DpllDerivation::elim(clause, lit, self.node()?)
            }
            Tok::Open("red") => {
                let clause = self.clause()?;
                let lit = self.literal()?;
                DpllDerivation::red(clause, lit, self.node()?)
            }
            Tok::Open("split") => {
                let lit = self.literal()?;
                let left = self.node()?;
                DpllDerivation::split(lit, left, self.node()?)
            }
            t => return Err(self.error(at, format!("expected a rule, found {t:?}"))),
        };
        self.close()?;
        Ok(node)
    }
}

pub fn parse_dpll(text: &str) -> Result<DpllDerivation, ProofParseError> {
    let mut lx = Lexer { text, pos: 0 };
    let node = lx.node()?;
    if let Some((at, t)) = lx.next() {
        return Err(lx.error(at, format!("trailing input {t:?}")));
    }
    Ok(node)
}

pub fn serialize_res(r: &ResDerivation) -> String {
    fn go(out: &mut String, next_id: &mut usize, r: &ResDerivation) -> usize {
        let line = match r {
            ResDerivation::Sub { premise, .. } => format!("S {premise}"),
            ResDerivation::Res {
                pivot, left, right, ..
            } => {
                let l = go(out, next_id, left);
                let rr = go(out, next_id, right);
                format!("R {pivot} {l} {rr}")
            }
        };
        *next_id += 1;
        let id = *next_id;
        let _ = write!(out, "{id} {line}");
        for l in r.conclusion().iter() {
            let _ = write!(out, " {l}");
        }
        out.push_str(" 0\n");
        id
    }
    let mut out = String::new();
    go(&mut out, &mut 0, r);
    out
}

/// Parses a resolution trace. Ids must be consecutive from 1, children must
/// precede their parent, and every node except the last must be used exactly
/// once. Stored conclusions are kept verbatim for the checker to verify.
pub fn parse_res(text: &str) -> Result<ResDerivation, ProofParseError> {
    let mut nodes: Vec<Option<ResDerivation>> = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let err = |message: String| ProofParseError {
            location: format!("line {}", ln + 1),
            message,
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.is_empty() || fields[0] == "c" {
            continue;
        }
        let int = |s: &str| -> Result<i64, ProofParseError> {
            s.parse::<i64>().map_err(|_| err(format!("expected integer, found `{s}`")))
        };
        let index = |s: &str| -> Result<usize, ProofParseError> {
            s.parse::<usize>().map_err(|_| err(format!("expected index, found `{s}`")))
        };
        let id = index(fields[0])?;
        if id != nodes.len() + 1 {
            return Err(err(format!("expected node id {}, found {id}", nodes.len() + 1)));
        }
        let kind = fields.get(1).copied().unwrap_or("");
        let (head, rest) = match kind {
            "S" if fields.len() >= 3 => (2, &fields[3..]),
            "R" if fields.len() >= 5 => (4, &fields[5..]),
            _ => return Err(err(format!("malformed node line `{line}`"))),
        };
        let Some((&"0", lits)) = rest.split_last() else {
            return Err(err("conclusion must end with 0".into()));
        };
        let mut conclusion = Vec::new();
        for s in lits {
            let v = int(s)?;
            conclusion.push(
                Literal::from_dimacs(v).ok_or_else(|| err(format!("invalid literal `{s}`")))?,
            );
        }
        let conclusion = Clause::canonicalize(conclusion);
        let node = if head == 2 {
            ResDerivation::Sub {
                premise: index(fields[2])?,
                conclusion,
            }
        } else {
            let pivot = Literal::from_dimacs(int(fields[2])?)
                .ok_or_else(|| err(format!("invalid pivot `{}`", fields[2])))?;
            let mut child = |s: &str| -> Result<ResDerivation, ProofParseError> {
                let c = index(s)?;
                if c == 0 || c >= id {
                    return Err(err(format!("child {c} must precede node {id}")));
                }
                nodes[c - 1]
                    .take()
                    .ok_or_else(|| err(format!("node {c} used twice")))
            };
            let left = child(fields[3])?;
            let right = child(fields[4])?;
            ResDerivation::Res {
                pivot,
                left: Box::new(left),
                right: Box::new(right),
                conclusion,
            }
        };
        nodes.push(Some(node));
    }
    let root = nodes.pop().flatten().ok_or_else(|| ProofParseError {
        location: "end of input".into(),
        message: "empty trace".into(),
    })?;
    if let Some(i) = nodes.iter().position(Option::is_some) {
        return Err(ProofParseError {
            location: format!("node {}", i + 1),
            message: "node is not used by the root".into(),
        });
    }
    Ok(root)
}
