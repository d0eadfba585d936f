//! Literals, clauses, formulae, valuations and assignments.
//!
//! Every collection type here is kept in a canonical form: clauses are sorted
//! and duplicate-free, formulae and valuations are duplicate-free and keep
//! the order in which members were first inserted. This gives decidable
//! equality and reproducible iteration order for everything built on top.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;

/// A propositional variable, identified by its DIMACS index (always `>= 1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Variable(u32);

impl Variable {
    /// Largest supported variable index (DIMACS literals are signed 32-bit).
    pub const MAX_ID: u32 = i32::MAX as u32;

    pub fn new(id: u32) -> Option<Variable> {
        (1..=Self::MAX_ID).contains(&id).then_some(Variable(id))
    }

    #[inline]
    pub fn id(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn positive(self) -> Literal {
        Literal::new(self, true)
    }

    #[inline]
    pub fn negative(self) -> Literal {
        Literal::new(self, false)
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A signed variable.
///
/// Encoded as `2 * var + (negative as u32)`, so the derived ordering is the
/// global ordering key `(var.id, positive < negative)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal(u32);

impl Literal {
    #[inline]
    pub fn new(var: Variable, positive: bool) -> Literal {
        Literal((var.0 << 1) | (!positive) as u32)
    }

    /// Builds a literal from a nonzero signed DIMACS integer.
    pub fn from_dimacs(value: i64) -> Option<Literal> {
        let id = u32::try_from(value.unsigned_abs()).ok()?;
        Variable::new(id).map(|var| Literal::new(var, value > 0))
    }

    #[inline]
    pub fn var(self) -> Variable {
        Variable(self.0 >> 1)
    }

    #[inline]
    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    /// The opposite literal: same variable, flipped polarity.
    #[inline]
    pub fn complement(self) -> Literal {
        Literal(self.0 ^ 1)
    }

    pub fn to_dimacs(self) -> i64 {
        let id = i64::from(self.var().0);
        if self.is_positive() {
            id
        } else {
            -id
        }
    }

    #[inline]
    pub(crate) fn code(self) -> usize {
        self.0 as usize
    }
}

/// Free-function form of [`Literal::complement`].
#[inline]
pub fn complement(l: Literal) -> Literal {
    l.complement()
}

impl fmt::Debug for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+}", self.to_dimacs())
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

/// A finite set of literals read disjunctively, stored sorted and without
/// duplicates. Cloning is cheap (shared storage).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Clause(Arc<[Literal]>);

impl Clause {
    pub fn empty() -> Clause {
        Clause(Arc::from(Vec::new()))
    }

    /// Sorts and deduplicates an arbitrary literal sequence.
    pub fn canonicalize<I: IntoIterator<Item = Literal>>(lits: I) -> Clause {
        let mut v: Vec<Literal> = lits.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Clause(Arc::from(v))
    }

    /// Convenience constructor from signed integers.
    ///
    /// # Panics
    /// On a zero or out-of-range literal.
    pub fn from_dimacs(lits: &[i64]) -> Clause {
        Clause::canonicalize(
            lits.iter()
                .map(|&k| Literal::from_dimacs(k).expect("nonzero literal")),
        )
    }

    pub fn literals(&self) -> &[Literal] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, l: Literal) -> bool {
        self.0.binary_search(&l).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = Literal> + '_ {
        self.0.iter().copied()
    }

    /// `self \ {l}`.
    pub fn without(&self, l: Literal) -> Clause {
        if !self.contains(l) {
            return self.clone();
        }
        Clause(self.iter().filter(|&x| x != l).collect())
    }

    /// `self ∪ {l}`.
    pub fn with(&self, l: Literal) -> Clause {
        match self.0.binary_search(&l) {
            Ok(_) => self.clone(),
            Err(pos) => {
                let mut v = self.0.to_vec();
                v.insert(pos, l);
                Clause(Arc::from(v))
            }
        }
    }

    pub fn union(&self, other: &Clause) -> Clause {
        Clause::canonicalize(self.iter().chain(other.iter()))
    }

    pub fn is_subset_of(&self, other: &Clause) -> bool {
        self.iter().all(|l| other.contains(l))
    }
}

impl FromIterator<Literal> for Clause {
    fn from_iter<I: IntoIterator<Item = Literal>>(iter: I) -> Self {
        Clause::canonicalize(iter)
    }
}

impl fmt::Debug for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

/// Free-function form of [`Clause::canonicalize`].
pub fn canonicalize<I: IntoIterator<Item = Literal>>(lits: I) -> Clause {
    Clause::canonicalize(lits)
}

/// A finite set of clauses read conjunctively. Clauses keep the order of
/// their first insertion; set-equal duplicates are dropped.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Formula {
    clauses: Vec<Clause>,
}

impl Formula {
    pub fn new() -> Formula {
        Formula::default()
    }

    pub fn from_clauses<I: IntoIterator<Item = Clause>>(clauses: I) -> Formula {
        let mut seen = HashSet::new();
        let clauses = clauses
            .into_iter()
            .filter(|c| seen.insert(c.clone()))
            .collect();
        Formula { clauses }
    }

    /// Builds a formula from nested signed-integer clauses.
    ///
    /// # Panics
    /// On a zero or out-of-range literal.
    pub fn from_dimacs(clauses: &[&[i64]]) -> Formula {
        Formula::from_clauses(clauses.iter().map(|c| Clause::from_dimacs(c)))
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Clause> {
        self.clauses.iter()
    }

    pub fn contains(&self, c: &Clause) -> bool {
        self.clauses.contains(c)
    }

    pub fn position(&self, c: &Clause) -> Option<usize> {
        self.clauses.iter().position(|x| x == c)
    }

    /// Appends `c` unless an equal clause is already present. Returns whether
    /// the formula changed.
    pub fn insert(&mut self, c: Clause) -> bool {
        if self.contains(&c) {
            false
        } else {
            self.clauses.push(c);
            true
        }
    }

    /// Removes the clause equal to `c`, if any.
    pub fn remove(&mut self, c: &Clause) -> bool {
        match self.position(c) {
            Some(i) => {
                self.clauses.remove(i);
                true
            }
            None => false,
        }
    }

    /// `self \ {c}` as a new formula.
    pub fn without(&self, c: &Clause) -> Formula {
        let mut f = self.clone();
        f.remove(c);
        f
    }

    /// Canonical union: the clauses of `self` followed by those of `other`
    /// not already present.
    pub fn union(&self, other: &Formula) -> Formula {
        let mut f = self.clone();
        for c in other.iter() {
            f.insert(c.clone());
        }
        f
    }

    pub fn contains_empty_clause(&self) -> bool {
        self.clauses.iter().any(Clause::is_empty)
    }

    /// Largest variable index mentioned, or 0.
    pub fn max_var(&self) -> u32 {
        self.clauses
            .iter()
            .flat_map(|c| c.iter())
            .map(|l| l.var().id())
            .max()
            .unwrap_or(0)
    }
}

impl FromIterator<Clause> for Formula {
    fn from_iter<I: IntoIterator<Item = Clause>>(iter: I) -> Self {
        Formula::from_clauses(iter)
    }
}

impl<'a> IntoIterator for &'a Formula {
    type Item = &'a Clause;
    type IntoIter = std::slice::Iter<'a, Clause>;

    fn into_iter(self) -> Self::IntoIter {
        self.clauses.iter()
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.clauses.iter()).finish()
    }
}

/// A finite set of literals read conjunctively: the partial decisions of a
/// proof search. Insertion order is preserved.
#[derive(Clone, Default)]
pub struct Valuation {
    order: Vec<Literal>,
    // membership bitmap indexed by literal code
    present: Vec<u64>,
}

impl Valuation {
    pub fn new() -> Valuation {
        Valuation::default()
    }

    pub fn from_literals<I: IntoIterator<Item = Literal>>(lits: I) -> Valuation {
        let mut g = Valuation::new();
        for l in lits {
            g.insert(l);
        }
        g
    }

    /// # Panics
    /// On a zero or out-of-range literal.
    pub fn from_dimacs(lits: &[i64]) -> Valuation {
        Valuation::from_literals(
            lits.iter()
                .map(|&k| Literal::from_dimacs(k).expect("nonzero literal")),
        )
    }

    #[inline]
    pub fn contains(&self, l: Literal) -> bool {
        let code = l.code();
        self.present
            .get(code / 64)
            .is_some_and(|w| w & (1 << (code % 64)) != 0)
    }

    /// Adds `l`; returns false if it was already present.
    pub fn insert(&mut self, l: Literal) -> bool {
        if self.contains(l) {
            return false;
        }
        let code = l.code();
        if self.present.len() <= code / 64 {
            self.present.resize(code / 64 + 1, 0);
        }
        self.present[code / 64] |= 1 << (code % 64);
        self.order.push(l);
        true
    }

    /// `self ∪ {l}` as a new valuation.
    pub fn with(&self, l: Literal) -> Valuation {
        let mut g = self.clone();
        g.insert(l);
        g
    }

    pub fn literals(&self) -> &[Literal] {
        &self.order
    }

    pub fn iter(&self) -> impl Iterator<Item = Literal> + '_ {
        self.order.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// True iff no literal occurs together with its complement.
    pub fn is_consistent(&self) -> bool {
        self.order.iter().all(|&l| !self.contains(l.complement()))
    }

    /// The first literal of `c` that is also in `self`, in clause order.
    pub fn first_common(&self, c: &Clause) -> Option<Literal> {
        c.iter().find(|&l| self.contains(l))
    }
}

impl PartialEq for Valuation {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order
    }
}

impl Eq for Valuation {}

impl fmt::Debug for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.order.iter()).finish()
    }
}

impl FromIterator<Literal> for Valuation {
    fn from_iter<I: IntoIterator<Item = Literal>>(iter: I) -> Self {
        Valuation::from_literals(iter)
    }
}

/// Free-function form of [`Valuation::is_consistent`].
pub fn is_consistent(g: &Valuation) -> bool {
    g.is_consistent()
}

/// A total truth assignment: explicit values for some variables, a default
/// polarity for every other one. Literals are evaluated through their
/// variable, so `value(l) == !value(complement(l))` always holds.
#[derive(Clone, PartialEq, Eq)]
pub struct Assignment {
    values: BTreeMap<Variable, bool>,
    default: bool,
}

impl Default for Assignment {
    /// Unmentioned variables are true.
    fn default() -> Self {
        Assignment {
            values: BTreeMap::new(),
            default: true,
        }
    }
}

impl Assignment {
    pub fn new(default: bool) -> Assignment {
        Assignment {
            values: BTreeMap::new(),
            default,
        }
    }

    pub fn set(&mut self, var: Variable, value: bool) {
        self.values.insert(var, value);
    }

    pub fn var_value(&self, var: Variable) -> bool {
        self.values.get(&var).copied().unwrap_or(self.default)
    }

    pub fn default_value(&self) -> bool {
        self.default
    }

    /// Explicitly assigned variables, ascending.
    pub fn explicit(&self) -> impl Iterator<Item = (Variable, bool)> + '_ {
        self.values.iter().map(|(&v, &b)| (v, b))
    }

    #[inline]
    pub fn value(&self, l: Literal) -> bool {
        self.var_value(l.var()) == l.is_positive()
    }

    pub fn eval<T: Evaluate + ?Sized>(&self, x: &T) -> bool {
        x.eval_under(self)
    }
}

impl fmt::Debug for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Assignment")
            .field("values", &self.values)
            .field("default", &self.default)
            .finish()
    }
}

/// Things that have a truth value under an [`Assignment`].
pub trait Evaluate {
    fn eval_under(&self, m: &Assignment) -> bool;
}

impl Evaluate for Literal {
    fn eval_under(&self, m: &Assignment) -> bool {
        m.value(*self)
    }
}

/// A clause holds iff some literal holds.
impl Evaluate for Clause {
    fn eval_under(&self, m: &Assignment) -> bool {
        self.iter().any(|l| m.value(l))
    }
}

/// A valuation holds iff every literal holds.
impl Evaluate for Valuation {
    fn eval_under(&self, m: &Assignment) -> bool {
        self.iter().all(|l| m.value(l))
    }
}

impl Evaluate for Formula {
    fn eval_under(&self, m: &Assignment) -> bool {
        self.iter().all(|c| c.eval_under(m))
    }
}

pub fn eval<T: Evaluate + ?Sized>(m: &Assignment, x: &T) -> bool {
    x.eval_under(m)
}

/// Things that mention variables.
pub trait HasVars {
    fn collect_vars(&self, out: &mut BTreeSet<Variable>);
}

impl HasVars for Clause {
    fn collect_vars(&self, out: &mut BTreeSet<Variable>) {
        out.extend(self.iter().map(Literal::var));
    }
}

impl HasVars for Formula {
    fn collect_vars(&self, out: &mut BTreeSet<Variable>) {
        for c in self {
            c.collect_vars(out);
        }
    }
}

impl HasVars for Valuation {
    fn collect_vars(&self, out: &mut BTreeSet<Variable>) {
        out.extend(self.iter().map(Literal::var));
    }
}

pub fn vars_of<T: HasVars + ?Sized>(x: &T) -> BTreeSet<Variable> {
    let mut out = BTreeSet::new();
    x.collect_vars(&mut out);
    out
}

/// Literals occurring in some clause of `d` whose variable is not in `vs`.
pub fn literals_outside(d: &Formula, vs: &BTreeSet<Variable>) -> BTreeSet<Literal> {
    d.iter()
        .flat_map(|c| c.iter())
        .filter(|l| !vs.contains(&l.var()))
        .collect()
}

/// Sum of clause cardinalities.
pub fn weight(d: &Formula) -> usize {
    d.iter().map(Clause::len).sum()
}

/// Termination measure of a solver state `(Γ, Δ, Θ)`: the number of distinct
/// literals of `Δ ∪ Θ` whose variable is unassigned by `Γ`, plus the weights
/// of `Δ` and `Θ`.
pub fn measure(g: &Valuation, d: &Formula, t: &Formula) -> usize {
    let assigned = vars_of(g);
    let outside: BTreeSet<Literal> = d
        .iter()
        .chain(t.iter())
        .flat_map(|c| c.iter())
        .filter(|l| !assigned.contains(&l.var()))
        .collect();
    outside.len() + weight(d) + weight(t)
}

/// The clause `{l̄ | l ∈ g}`.
pub fn negate_valuation(g: &Valuation) -> Clause {
    Clause::canonicalize(g.iter().map(Literal::complement))
}
