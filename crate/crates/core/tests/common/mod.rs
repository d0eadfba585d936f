#![allow(dead_code)]

use dpllkit::dpll_proof::context_at;
use dpllkit::{
    check_dpll, check_res, Clause, DpllDerivation, FailureContext, Formula,
    Literal, Oracle, ResDerivation, Valuation, Violation,
};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn lit(k: i64) -> Literal {
    Literal::from_dimacs(k).unwrap()
}

pub fn random_literal(rng: &mut TestRng, vars: i64) -> Literal {
    let v = rng.gen_range(1..=vars);
    lit(if rng.gen_bool(0.5) { v } else { -v })
}

/// Up to `max_vars` variables, up to `max_clauses` clauses of width 1..=3
/// (occasionally empty).
pub fn random_cnf(rng: &mut TestRng, max_vars: i64, max_clauses: usize) -> Formula {
    let vars = rng.gen_range(1..=max_vars);
    let n = rng.gen_range(0..=max_clauses);
    (0..n)
        .map(|_| {
            let width = if rng.gen_ratio(1, 60) { 0 } else { rng.gen_range(1..=3) };
            Clause::canonicalize((0..width).map(|_| random_literal(rng, vars)))
        })
        .collect()
}

/// Random formulas the oracle finds unsatisfiable.
pub fn random_unsat_cnfs(rng: &mut TestRng, count: usize, max_vars: i64, max_clauses: usize) -> Vec<Formula> {
    let oracle = Oracle::default();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let f = random_cnf(rng, max_vars, max_clauses);
        if !oracle.brute_force_sat(&f).unwrap().is_sat() {
            out.push(f);
        }
    }
    out
}

/// True iff `clause` holds in every model of `d0` (checked by enumeration).
pub fn implied_by(d0: &Formula, clause: &Clause) -> bool {
    let negated = Valuation::from_literals(clause.iter().map(Literal::complement));
    !Oracle::default().compatible(&negated, d0).unwrap().is_sat()
}

pub fn parent(path: &[usize]) -> &[usize] {
    &path[..path.len().saturating_sub(1)]
}

// ---------------------------------------------------------------------------
// DPLL mutations

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DpllMutation {
    FlipLiteral,
    RandomLiteral,
    DropClauseLiteral,
    SwapSplitChildren,
    DeleteSubtree,
}

/// Applies one random mutation at a random node. Returns the mutated path
/// and kind, or None when the chosen node admits no mutation of that kind.
pub fn mutate_dpll(
    rng: &mut TestRng,
    p: &DpllDerivation,
    vars: i64,
) -> Option<(DpllDerivation, Vec<usize>, DpllMutation)> {
    let paths = p.paths();
    let path = paths.choose(rng)?.clone();
    let kind = *[
        DpllMutation::FlipLiteral,
        DpllMutation::RandomLiteral,
        DpllMutation::DropClauseLiteral,
        DpllMutation::SwapSplitChildren,
        DpllMutation::DeleteSubtree,
    ]
    .choose(rng)?;
    let mut m = p.clone();
    let node = m.at_mut(&path)?;
    let changed = match (kind, &mut *node) {
        (DpllMutation::FlipLiteral, DpllDerivation::Unit { lit, .. })
        | (DpllMutation::FlipLiteral, DpllDerivation::Elim { lit, .. })
        | (DpllMutation::FlipLiteral, DpllDerivation::Red { lit, .. })
        | (DpllMutation::FlipLiteral, DpllDerivation::Split { lit, .. }) => {
            *lit = lit.complement();
            true
        }
        (DpllMutation::RandomLiteral, DpllDerivation::Unit { lit, .. })
        | (DpllMutation::RandomLiteral, DpllDerivation::Elim { lit, .. })
        | (DpllMutation::RandomLiteral, DpllDerivation::Red { lit, .. })
        | (DpllMutation::RandomLiteral, DpllDerivation::Split { lit, .. }) => {
            let new = random_literal(rng, vars);
            let changed = new != *lit;
            *lit = new;
            changed
        }
        (DpllMutation::DropClauseLiteral, DpllDerivation::Elim { clause, .. })
        | (DpllMutation::DropClauseLiteral, DpllDerivation::Red { clause, .. })
            if !clause.is_empty() =>
        {
            let l = *clause.literals().choose(rng).unwrap();
            *clause = clause.without(l);
            true
        }
        (DpllMutation::SwapSplitChildren, DpllDerivation::Split { left, right, .. }) => {
            std::mem::swap(left, right);
            left != right
        }
        (DpllMutation::DeleteSubtree, n) if *n != DpllDerivation::Conflict => {
            *n = DpllDerivation::Conflict;
            true
        }
        _ => false,
    };
    changed.then_some((m, path, kind))
}

/// Independently confirms that the node at the reported path violates the
/// reported side condition in the reported context.
pub fn confirm_dpll_violation(
    g0: &Valuation,
    d0: &Formula,
    p: &DpllDerivation,
    path: &[usize],
    reason: Violation,
    context: &FailureContext,
) -> Result<(), String> {
    let (g, d) = context_at(g0, d0, p, path).ok_or("failure path does not exist")?;
    match context {
        FailureContext::Sequent { valuation, formula } => {
            if *valuation != g || *formula != d {
                return Err(format!("reported context differs at {path:?}"));
            }
        }
        _ => return Err("wrong context kind".into()),
    }
    let node = p.at(path).ok_or("no node at path")?;
    let holds = match (reason, node) {
        (Violation::InconsistentContext, DpllDerivation::Unit { lit, .. }) => g.contains(lit.complement()),
        (Violation::InconsistentContext, DpllDerivation::Split { lit, .. }) => {
            g.contains(*lit) || g.contains(lit.complement())
        }
        (Violation::InconsistentContext, _) => !g.is_consistent(),
        (Violation::EmptyClauseMissing, DpllDerivation::Conflict) => !d.contains(&Clause::empty()),
        (Violation::UnitClauseMissing, DpllDerivation::Unit { lit, .. }) => {
            !d.contains(&Clause::canonicalize([*lit]))
        }
        (Violation::LiteralNotInValuation, DpllDerivation::Elim { lit, .. })
        | (Violation::LiteralNotInValuation, DpllDerivation::Red { lit, .. }) => !g.contains(*lit),
        (Violation::LiteralNotInClause, DpllDerivation::Elim { clause, lit, .. }) => !clause.contains(*lit),
        (Violation::ComplementNotInClause, DpllDerivation::Red { clause, lit, .. }) => {
            !clause.contains(lit.complement())
        }
        (Violation::ClauseNotInFormula, DpllDerivation::Elim { clause, .. })
        | (Violation::ClauseNotInFormula, DpllDerivation::Red { clause, .. }) => !d.contains(clause),
        _ => false,
    };
    if holds {
        Ok(())
    } else {
        Err(format!("{reason} does not hold for {} at {path:?}", node.rule_name()))
    }
}

// ---------------------------------------------------------------------------
// resolution mutations

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResMutation {
    FlipPivot,
    RandomPivot,
    PremiseIndex,
    AddConclusionLiteral,
    DropConclusionLiteral,
    SwapChildren,
    DeleteSubtree,
}

pub fn mutate_res(
    rng: &mut TestRng,
    r: &ResDerivation,
    premises: usize,
    vars: i64,
) -> Option<(ResDerivation, Vec<usize>, ResMutation)> {
    let paths = r.paths();
    let path = paths.choose(rng)?.clone();
    let kind = *[
        ResMutation::FlipPivot,
        ResMutation::RandomPivot,
        ResMutation::PremiseIndex,
        ResMutation::AddConclusionLiteral,
        ResMutation::DropConclusionLiteral,
        ResMutation::SwapChildren,
        ResMutation::DeleteSubtree,
    ]
    .choose(rng)?;
    let mut m = r.clone();
    let node = m.at_mut(&path)?;
    let changed = match (kind, &mut *node) {
        (ResMutation::FlipPivot, ResDerivation::Res { pivot, .. }) => {
            *pivot = pivot.complement();
            true
        }
        (ResMutation::RandomPivot, ResDerivation::Res { pivot, .. }) => {
            let new = random_literal(rng, vars);
            let changed = new != *pivot;
            *pivot = new;
            changed
        }
        (ResMutation::PremiseIndex, ResDerivation::Sub { premise, .. }) => {
            let new = rng.gen_range(0..=premises + 1);
            let changed = new != *premise;
            *premise = new;
            changed
        }
        (ResMutation::AddConclusionLiteral, n) => {
            let l = random_literal(rng, vars);
            let c = conclusion_mut(n);
            let changed = !c.contains(l);
            *c = c.with(l);
            changed
        }
        (ResMutation::DropConclusionLiteral, n) if !n.conclusion().is_empty() => {
            let l = *n.conclusion().literals().choose(rng).unwrap();
            let c = conclusion_mut(n);
            *c = c.without(l);
            true
        }
        (ResMutation::SwapChildren, ResDerivation::Res { left, right, .. }) => {
            std::mem::swap(left, right);
            left != right
        }
        (ResMutation::DeleteSubtree, n) if matches!(n, ResDerivation::Res { .. }) => {
            let premise = rng.gen_range(1..=premises);
            *n = ResDerivation::sub(premise, n.conclusion().clone());
            true
        }
        _ => false,
    };
    changed.then_some((m, path, kind))
}

fn conclusion_mut(n: &mut ResDerivation) -> &mut Clause {
    match n {
        ResDerivation::Sub { conclusion, .. } | ResDerivation::Res { conclusion, .. } => conclusion,
    }
}

/// Independently confirms a resolution-checker failure.
pub fn confirm_res_violation(
    d0: &Formula,
    r: &ResDerivation,
    path: &[usize],
    reason: Violation,
) -> Result<(), String> {
    let node = r.at(path).ok_or("no node at path")?;
    let holds = match (reason, node) {
        (Violation::PremiseIndex, ResDerivation::Sub { premise, .. }) => *premise == 0 || *premise > d0.len(),
        (Violation::Subsumption, ResDerivation::Sub { premise, conclusion }) => {
            !d0.clauses()[premise - 1].iter().all(|l| conclusion.contains(l))
        }
        (Violation::PivotNotInLeft, ResDerivation::Res { pivot, left, .. }) => {
            !left.conclusion().contains(pivot.complement())
        }
        (Violation::PivotNotInRight, ResDerivation::Res { pivot, right, .. }) => {
            !right.conclusion().contains(*pivot)
        }
        (Violation::ConclusionMismatch, ResDerivation::Res { pivot, left, right, conclusion }) => {
            let mut expected: Vec<Literal> = left
                .conclusion()
                .iter()
                .filter(|&l| l != pivot.complement())
                .chain(right.conclusion().iter().filter(|&l| l != *pivot))
                .collect();
            expected.sort();
            expected.dedup();
            expected.as_slice() != conclusion.literals()
        }
        _ => false,
    };
    if holds {
        Ok(())
    } else {
        Err(format!("{reason} does not hold at {path:?}"))
    }
}

/// Re-export so tests can assert both checkers agree with themselves.
pub fn dpll_valid(g: &Valuation, d: &Formula, p: &DpllDerivation) -> bool {
    check_dpll(g, d, p).is_valid()
}

pub fn res_valid(d: &Formula, r: &ResDerivation) -> bool {
    check_res(d, r).is_valid()
}
