//! DPLL derivations and their checker.
//!
//! A derivation only records what each rule adds or touches (a literal, a
//! clause). The sequent `Γ ⊢ Δ` at every node is reconstructed top-down from
//! the root sequent, so the checker never trusts anything the producer
//! computed.

use crate::cnf::{Clause, Formula, Literal, Valuation};
use crate::report::{CheckFailure, CheckReport, FailureContext, Violation};

/// A refutation tree for a sequent `Γ ⊢ Δ` ("Γ and Δ are incompatible").
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum DpllDerivation {
    /// `∅ ∈ Δ`.
    Conflict,
    /// `{lit} ∈ Δ`; continue with `Γ ∪ {lit} ⊢ Δ \ {{lit}}`.
    Unit {
        lit: Literal,
        sub: Box<DpllDerivation>,
    },
    /// `lit ∈ Γ`, `lit ∈ clause ∈ Δ`; continue with `Γ ⊢ Δ \ {clause}`.
    Elim {
        clause: Clause,
        lit: Literal,
        sub: Box<DpllDerivation>,
    },
    /// `lit ∈ Γ`, `¬lit ∈ clause ∈ Δ`; continue with
    /// `Γ ⊢ (Δ \ {clause}) ∪ {clause \ {¬lit}}`.
    Red {
        clause: Clause,
        lit: Literal,
        sub: Box<DpllDerivation>,
    },
    /// Case split: `left` refutes `Γ ∪ {lit}`, `right` refutes `Γ ∪ {¬lit}`.
    Split {
        lit: Literal,
        left: Box<DpllDerivation>,
        right: Box<DpllDerivation>,
    },
}

impl DpllDerivation {
    pub fn unit(lit: Literal, sub: DpllDerivation) -> Self {
        DpllDerivation::Unit {
            lit,
            sub: Box::new(sub),
        }
    }

    pub fn elim(clause: Clause, lit: Literal, sub: DpllDerivation) -> Self {
        DpllDerivation::Elim {
            clause,
            lit,
            sub: Box::new(sub),
        }
    }

    pub fn red(clause: Clause, lit: Literal, sub: DpllDerivation) -> Self {
        DpllDerivation::Red {
            clause,
            lit,
            sub: Box::new(sub),
        }
    }

    pub fn split(lit: Literal, left: DpllDerivation, right: DpllDerivation) -> Self {
        DpllDerivation::Split {
            lit,
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    /// Number of rule applications other than `Conflict`.
    pub fn size(&self) -> usize {
        match self {
            DpllDerivation::Conflict => 0,
            DpllDerivation::Unit { sub, .. }
            | DpllDerivation::Elim { sub, .. }
            | DpllDerivation::Red { sub, .. } => 1 + sub.size(),
            DpllDerivation::Split { left, right, .. } => 1 + left.size() + right.size(),
        }
    }

    pub fn rule_name(&self) -> &'static str {
        match self {
            DpllDerivation::Conflict => "conflict",
            DpllDerivation::Unit { .. } => "unit",
            DpllDerivation::Elim { .. } => "elim",
            DpllDerivation::Red { .. } => "red",
            DpllDerivation::Split { .. } => "split",
        }
    }

    pub fn children(&self) -> Vec<&DpllDerivation> {
        match self {
            DpllDerivation::Conflict => vec![],
            DpllDerivation::Unit { sub, .. }
            | DpllDerivation::Elim { sub, .. }
            | DpllDerivation::Red { sub, .. } => vec![sub],
            DpllDerivation::Split { left, right, .. } => vec![left, right],
        }
    }

    /// The subtree at `path`, if it exists.
    pub fn at(&self, path: &[usize]) -> Option<&DpllDerivation> {
        path.iter()
            .try_fold(self, |node, &i| node.children().get(i).copied())
    }

    pub fn at_mut(&mut self, path: &[usize]) -> Option<&mut DpllDerivation> {
        let mut node = self;
        for &i in path {
            node = match (node, i) {
                (DpllDerivation::Unit { sub, .. }, 0)
                | (DpllDerivation::Elim { sub, .. }, 0)
                | (DpllDerivation::Red { sub, .. }, 0)
                | (DpllDerivation::Split { left: sub, .. }, 0)
                | (DpllDerivation::Split { right: sub, .. }, 1) => sub,
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
            let children = node.children();
            for (i, c) in children.iter().enumerate().rev() {
                let mut p = path.clone();
                p.push(i);
                stack.push((c, p));
            }
            out.push(path);
        }
        out
    }
}

/// Free-function form of [`DpllDerivation::size`].
pub fn dpll_size(d: &DpllDerivation) -> usize {
    d.size()
}

/// Checks that `d` derives `g0 ⊢ d0`.
pub fn check_dpll(g0: &Valuation, d0: &Formula, d: &DpllDerivation) -> CheckReport {
    let mut path = Vec::new();
    if !g0.is_consistent() {
        return CheckReport::invalid(fail(&path, Violation::InconsistentContext, g0, d0));
    }
    check_node(g0, d0, d, &mut path).into()
}

fn fail(path: &[usize], reason: Violation, g: &Valuation, d: &Formula) -> CheckFailure {
    CheckFailure {
        path: path.to_vec(),
        reason,
        context: FailureContext::Sequent {
            valuation: g.clone(),
            formula: d.clone(),
        },
    }
}

fn check_node(
    g: &Valuation,
    d: &Formula,
    node: &DpllDerivation,
    path: &mut Vec<usize>,
) -> Result<(), CheckFailure> {
    match node {
        DpllDerivation::Conflict => {
            if !d.contains_empty_clause() {
                return Err(fail(path, Violation::EmptyClauseMissing, g, d));
            }
            Ok(())
        }
        DpllDerivation::Unit { lit, sub } => {
            let unit = Clause::canonicalize([*lit]);
            if !d.contains(&unit) {
                return Err(fail(path, Violation::UnitClauseMissing, g, d));
            }
            if g.contains(lit.complement()) {
                return Err(fail(path, Violation::InconsistentContext, g, d));
            }
            descend(&g.with(*lit), &d.without(&unit), sub, path, 0)
        }
        DpllDerivation::Elim { clause, lit, sub } => {
            if !g.contains(*lit) {
                return Err(fail(path, Violation::LiteralNotInValuation, g, d));
            }
            if !clause.contains(*lit) {
                return Err(fail(path, Violation::LiteralNotInClause, g, d));
            }
            if !d.contains(clause) {
                return Err(fail(path, Violation::ClauseNotInFormula, g, d));
            }
            descend(g, &d.without(clause), sub, path, 0)
        }
        DpllDerivation::Red { clause, lit, sub } => {
            if !g.contains(*lit) {
                return Err(fail(path, Violation::LiteralNotInValuation, g, d));
            }
            if !clause.contains(lit.complement()) {
                return Err(fail(path, Violation::ComplementNotInClause, g, d));
            }
            if !d.contains(clause) {
                return Err(fail(path, Violation::ClauseNotInFormula, g, d));
            }
            let mut reduced = d.without(clause);
            reduced.insert(clause.without(lit.complement()));
            descend(g, &reduced, sub, path, 0)
        }
        DpllDerivation::Split { lit, left, right } => {
            if g.contains(*lit) || g.contains(lit.complement()) {
                return Err(fail(path, Violation::InconsistentContext, g, d));
            }
            descend(&g.with(*lit), d, left, path, 0)?;
            descend(&g.with(lit.complement()), d, right, path, 1)
        }
    }
}

fn descend(
    g: &Valuation,
    d: &Formula,
    node: &DpllDerivation,
    path: &mut Vec<usize>,
    child: usize,
) -> Result<(), CheckFailure> {
    path.push(child);
    let r = check_node(g, d, node, path);
    path.pop();
    r
}

/// Visits every node in pre-order together with its reconstructed sequent,
/// without checking side conditions. Reconstruction stops below a node whose
/// clause cannot be located.
pub fn visit_contexts<F>(g0: &Valuation, d0: &Formula, d: &DpllDerivation, mut visit: F)
where
    F: FnMut(&[usize], &Valuation, &Formula, &DpllDerivation),
{
    fn go<F>(
        g: &Valuation,
        d: &Formula,
        node: &DpllDerivation,
        path: &mut Vec<usize>,
        visit: &mut F,
    ) where
        F: FnMut(&[usize], &Valuation, &Formula, &DpllDerivation),
    {
        visit(path, g, d, node);
        let mut child = |g: &Valuation, d: &Formula, n: &DpllDerivation, i: usize| {
            path.push(i);
            go(g, d, n, path, visit);
            path.pop();
        };
        match node {
            DpllDerivation::Conflict => {}
            DpllDerivation::Unit { lit, sub } => {
                let unit = Clause::canonicalize([*lit]);
                child(&g.with(*lit), &d.without(&unit), sub, 0);
            }
            DpllDerivation::Elim { clause, sub, .. } => child(g, &d.without(clause), sub, 0),
            DpllDerivation::Red { clause, lit, sub } => {
                let mut reduced = d.without(clause);
                reduced.insert(clause.without(lit.complement()));
                child(g, &reduced, sub, 0);
            }
            DpllDerivation::Split { lit, left, right } => {
                child(&g.with(*lit), d, left, 0);
                child(&g.with(lit.complement()), d, right, 1);
            }
        }
    }
    go(g0, d0, d, &mut Vec::new(), &mut visit);
}

/// The sequent `(Γ, Δ)` at `path`.
pub fn context_at(
    g0: &Valuation,
    d0: &Formula,
    d: &DpllDerivation,
    path: &[usize],
) -> Option<(Valuation, Formula)> {
    let mut found = None;
    visit_contexts(g0, d0, d, |p, g, f, _| {
        if found.is_none() && p == path {
            found = Some((g.clone(), f.clone()));
        }
    });
    found
}
