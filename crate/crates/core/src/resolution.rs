//! Resolution derivations, their checker, and the translation of DPLL
//! refutations into resolution refutations of no greater size.

use thiserror::Error;

use crate::cnf::{negate_valuation, Assignment, Clause, Formula, Literal, Valuation};
use crate::dpll_proof::{check_dpll, DpllDerivation};
use crate::report::{CheckFailure, CheckReport, FailureContext, Violation};
use crate::solver::{Solver, SolverConfig, Verdict};

/// A resolution derivation of its root conclusion from a fixed premise
/// formula. Every node stores its conclusion.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ResDerivation {
    /// Weakening of premise number `premise` (1-based) to `conclusion`.
    Sub { premise: usize, conclusion: Clause },
    /// Resolution on `pivot`: `left` contains `¬pivot`, `right` contains
    /// `pivot`, and `conclusion` is
    /// `(left \ {¬pivot}) ∪ (right \ {pivot})`.
    Res {
        pivot: Literal,
        left: Box<ResDerivation>,
        right: Box<ResDerivation>,
        conclusion: Clause,
    },
}

impl ResDerivation {
    pub fn sub(premise: usize, conclusion: Clause) -> Self {
        ResDerivation::Sub {
            premise,
            conclusion,
        }
    }

    /// Resolves two derivations on `pivot`, computing the conclusion.
    pub fn res(pivot: Literal, left: ResDerivation, right: ResDerivation) -> Self {
        let conclusion = resolvent(pivot, left.conclusion(), right.conclusion());
        ResDerivation::Res {
            pivot,
            left: Box::new(left),
            right: Box::new(right),
            conclusion,
        }
    }

    pub fn conclusion(&self) -> &Clause {
        match self {
            ResDerivation::Sub { conclusion, .. } | ResDerivation::Res { conclusion, .. } => {
                conclusion
            }
        }
    }

    /// Number of resolution steps.
    pub fn size(&self) -> usize {
        match self {
            ResDerivation::Sub { .. } => 0,
            ResDerivation::Res { left, right, .. } => 1 + left.size() + right.size(),
        }
    }

    pub fn children(&self) -> Vec<&ResDerivation> {
        match self {
            ResDerivation::Sub { .. } => vec![],
            ResDerivation::Res { left, right, .. } => vec![left, right],
        }
    }

    pub fn at(&self, path: &[usize]) -> Option<&ResDerivation> {
        path.iter()
            .try_fold(self, |node, &i| node.children().get(i).copied())
    }

    pub fn at_mut(&mut self, path: &[usize]) -> Option<&mut ResDerivation> {
        let mut node = self;
        for &i in path {
            node = match (node, i) {
                (ResDerivation::Res { left, .. }, 0) => left,
                (ResDerivation::Res { right, .. }, 1) => right,
                _ => return None,
            };
        }
        Some(node)
    }

    /// Paths of all nodes in pre-order.
    pub fn paths(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut stack = vec![(self, Vec::new())];
        while let Some((node, path)) = stack.pop() {
            for (i, c) in node.children().iter().enumerate().rev() {
                let mut p = path.clone();
                p.push(i);
                stack.push((c, p));
            }
            out.push(path);
        }
        out
    }
}

/// `(left \ {¬pivot}) ∪ (right \ {pivot})`.
pub fn resolvent(pivot: Literal, left: &Clause, right: &Clause) -> Clause {
    left.iter()
        .filter(|&l| l != pivot.complement())
        .chain(right.iter().filter(|&l| l != pivot))
        .collect()
}

pub fn res_size(d: &ResDerivation) -> usize {
    d.size()
}

pub fn res_conclusion(d: &ResDerivation) -> &Clause {
    d.conclusion()
}

/// Checks every node of `d` against the premises `d0`, in pre-order.
pub fn check_res(d0: &Formula, d: &ResDerivation) -> CheckReport {
    check_node(d0, d, &mut Vec::new()).into()
}

fn check_node(d0: &Formula, node: &ResDerivation, path: &mut Vec<usize>) -> Result<(), CheckFailure> {
    let fail = |path: &[usize], reason, premises: Vec<Clause>| CheckFailure {
        path: path.to_vec(),
        reason,
        context: FailureContext::Resolution {
            conclusion: node.conclusion().clone(),
            premises,
        },
    };
    match node {
        ResDerivation::Sub {
            premise,
            conclusion,
        } => {
            let Some(c) = premise.checked_sub(1).and_then(|i| d0.clauses().get(i)) else {
                return Err(fail(path, Violation::PremiseIndex, vec![]));
            };
            if !c.is_subset_of(conclusion) {
                return Err(fail(path, Violation::Subsumption, vec![c.clone()]));
            }
            Ok(())
        }
        ResDerivation::Res {
            pivot,
            left,
            right,
            conclusion,
        } => {
            let premises = || vec![left.conclusion().clone(), right.conclusion().clone()];
            if !left.conclusion().contains(pivot.complement()) {
                return Err(fail(path, Violation::PivotNotInLeft, premises()));
            }
            if !right.conclusion().contains(*pivot) {
                return Err(fail(path, Violation::PivotNotInRight, premises()));
            }
            if *conclusion != resolvent(*pivot, left.conclusion(), right.conclusion()) {
                return Err(fail(path, Violation::ConclusionMismatch, premises()));
            }
            for (i, child) in [left, right].into_iter().enumerate() {
                path.push(i);
                let r = check_node(d0, child, path);
                path.pop();
                r?;
            }
            Ok(())
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TranslateError {
    #[error("valuation {0:?} is inconsistent")]
    InconsistentValuation(Valuation),
    #[error("DPLL derivation does not check: {0}")]
    InvalidDerivation(CheckFailure),
}

/// Translates a DPLL derivation of `g ⊢ d0` into a resolution derivation
/// from `d0` whose conclusion is a subset of `¬g` and whose size is at most
/// the size of `p`.
///
/// `Conflict` becomes a `Sub` of the empty clause and `Split` a resolution
/// on the split literal. `Unit` becomes a resolution against the unit
/// premise. `Elim` costs nothing. `Red` translates its premise over the
/// shortened clause and then lifts every leaf citing the shortened clause
/// back to the original (see [`lift_clause`]). A resolution step is skipped
/// whenever the sub-derivation's conclusion already lacks the literal it
/// would remove.
pub fn dpll_to_res(
    g: &Valuation,
    d0: &Formula,
    p: &DpllDerivation,
) -> Result<ResDerivation, TranslateError> {
    if !g.is_consistent() {
        return Err(TranslateError::InconsistentValuation(g.clone()));
    }
    if let Some(f) = check_dpll(g, d0, p).into_failure() {
        return Err(TranslateError::InvalidDerivation(f));
    }
    // Premise table indexed like `d0`. `Red` temporarily overwrites a slot
    // with the shortened clause; clauses consumed by `Unit`/`Elim` stay in
    // place, since a derivation from fewer premises is also one from more.
    let mut table = d0.clauses().to_vec();
    Ok(translate(&mut table, p))
}

fn slot_of(table: &[Clause], c: &Clause) -> usize {
    table
        .iter()
        .position(|x| x == c)
        .expect("checked derivation only cites clauses of its context")
}

fn translate(table: &mut Vec<Clause>, p: &DpllDerivation) -> ResDerivation {
    match p {
        DpllDerivation::Conflict => {
            let i = slot_of(table, &Clause::empty());
            ResDerivation::sub(i + 1, Clause::empty())
        }
        DpllDerivation::Unit { lit, sub } => {
            let unit = Clause::canonicalize([*lit]);
            let i = slot_of(table, &unit);
            let r = translate(table, sub);
            if r.conclusion().contains(lit.complement()) {
                ResDerivation::res(*lit, r, ResDerivation::sub(i + 1, unit))
            } else {
                r
            }
        }
        DpllDerivation::Elim { sub, .. } => translate(table, sub),
        DpllDerivation::Red { clause, lit, sub } => {
            let i = slot_of(table, clause);
            let removed = lit.complement();
            table[i] = clause.without(removed);
            let r = translate(table, sub);
            table[i] = clause.clone();
            lift_slot(r, i + 1, removed)
        }
        DpllDerivation::Split { lit, left, right } => {
            let a = translate(table, left);
            if !a.conclusion().contains(lit.complement()) {
                return a;
            }
            let b = translate(table, right);
            if !b.conclusion().contains(*lit) {
                return b;
            }
            ResDerivation::res(*lit, a, b)
        }
    }
}

/// Adds `added` to every leaf citing premise `slot` and recomputes the
/// conclusions above them.
fn lift_slot(d: ResDerivation, slot: usize, added: Literal) -> ResDerivation {
    match d {
        ResDerivation::Sub {
            premise,
            conclusion,
        } if premise == slot => ResDerivation::sub(premise, conclusion.with(added)),
        sub @ ResDerivation::Sub { .. } => sub,
        ResDerivation::Res {
            pivot, left, right, ..
        } => ResDerivation::res(
            pivot,
            lift_slot(*left, slot, added),
            lift_slot(*right, slot, added),
        ),
    }
}

/// Re-targets a derivation from `premises` to the formula obtained by
/// replacing clause `old` with `new = old ∪ {added}` in place.
///
/// Every leaf citing `old` gains `added`; conclusions above grow by at most
/// `added`. Premise indices and size are unchanged.
pub fn lift_clause(
    d: &ResDerivation,
    premises: &Formula,
    old: &Clause,
    new: &Clause,
    added: Literal,
) -> ResDerivation {
    debug_assert_eq!(*new, old.with(added));
    match premises.position(old) {
        Some(i) => lift_slot(d.clone(), i + 1, added),
        None => d.clone(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ResVerdict {
    Sat(Assignment),
    Unsat(ResDerivation),
}

impl ResVerdict {
    pub fn is_sat(&self) -> bool {
        matches!(self, ResVerdict::Sat(_))
    }
}

/// A model of `d0`, or a resolution refutation of it.
pub fn refute(d0: &Formula) -> ResVerdict {
    match Solver::new(SolverConfig::default()).solve_witness(d0) {
        Verdict::Sat(m) => ResVerdict::Sat(m),
        Verdict::Unsat(p) => {
            let r = dpll_to_res(&Valuation::new(), d0, &p)
                .expect("solver output is a checked derivation");
            debug_assert!(r.conclusion().is_subset_of(&negate_valuation(&Valuation::new())));
            ResVerdict::Unsat(r)
        }
    }
}
