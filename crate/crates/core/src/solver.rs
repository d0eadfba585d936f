//! The evidence-producing DPLL procedure.
//!
//! The search state is a triple `(Γ, Δ, Θ)`: a consistent valuation `Γ`, the
//! clauses `Δ` still to be inspected, and the clean clauses `Θ` that share no
//! variable with `Γ` (only a split can make progress on those). The head
//! clause `C` of `Δ` is inspected each step:
//!
//! | state                          | action                                         |
//! |--------------------------------|------------------------------------------------|
//! | `Δ = Θ = ∅`                    | model from `Γ`                                 |
//! | `Δ = ∅`, `Θ ≠ ∅`               | split on the first literal of `Θ`              |
//! | `Γ ∩ C ∋ l`                    | drop `C` (Elim)                                |
//! | `C = ∅`                        | Conflict                                       |
//! | `C = {l}`, `¬l ∈ Γ`            | Red then Conflict                              |
//! | `C = {l}`                      | assign `l`, rescan `Δ′ ∪ Θ` (Unit)             |
//! | `l ∈ C`, `¬l ∈ Γ`              | replace `C` by `C \ {l}` (Red)                 |
//! | otherwise                      | move `C` to `Θ`                                |
//!
//! Every transition strictly decreases `(measure(Γ, Δ, Θ), |Δ|)`
//! lexicographically; with [`SolverConfig::assert_measure`] this is checked
//! at runtime.
//!
//! The recursion is run on an explicit frame stack. A satisfying assignment
//! passes through every frame unchanged, so it is returned as soon as it is
//! found; a refutation is wrapped by each frame on the way back up. The right
//! branch of a split is only explored once the left one came back refuted.

use std::collections::VecDeque;

use thiserror::Error;

use crate::cnf::{measure, vars_of, Assignment, Clause, Formula, Literal, Valuation};
use crate::dpll_proof::DpllDerivation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    /// Produce a model or a refutation.
    #[default]
    Witness,
    /// Only report satisfiability.
    Decide,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SolverConfig {
    pub mode: Mode,
    /// Check the termination measure on every transition.
    pub assert_measure: bool,
    /// Log every case taken at `trace` level.
    pub trace: bool,
}

impl SolverConfig {
    pub fn witness() -> Self {
        SolverConfig::default()
    }

    pub fn decide() -> Self {
        SolverConfig {
            mode: Mode::Decide,
            ..SolverConfig::default()
        }
    }

    pub fn with_measure_assertions(mut self) -> Self {
        self.assert_measure = true;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Sat(Assignment),
    Unsat(DpllDerivation),
}

impl Verdict {
    pub fn is_sat(&self) -> bool {
        matches!(self, Verdict::Sat(_))
    }

    pub fn model(&self) -> Option<&Assignment> {
        match self {
            Verdict::Sat(m) => Some(m),
            Verdict::Unsat(_) => None,
        }
    }

    pub fn proof(&self) -> Option<&DpllDerivation> {
        match self {
            Verdict::Sat(_) => None,
            Verdict::Unsat(p) => Some(p),
        }
    }
}

/// What [`Solver::solve`] returns, depending on the configured mode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Answer {
    Witness(Verdict),
    Decision(bool),
}

impl Answer {
    pub fn is_sat(&self) -> bool {
        match self {
            Answer::Witness(v) => v.is_sat(),
            Answer::Decision(b) => *b,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolverError {
    #[error("valuation {0:?} is inconsistent")]
    InconsistentValuation(Valuation),
    #[error("clean clause set contains the empty clause")]
    EmptyCleanClause,
    #[error("valuation and clean clauses share variables")]
    CleanClauseTouchesValuation,
    #[error("cannot split on an empty clean clause set")]
    NothingToSplit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SolveStats {
    /// State transitions, including the initial state.
    pub steps: u64,
    pub splits: u64,
    pub max_frames: usize,
    pub measure_checks: u64,
    pub measure_violations: u64,
}

impl SolveStats {
    pub fn absorb(&mut self, other: &SolveStats) {
        self.steps += other.steps;
        self.splits += other.splits;
        self.max_frames = self.max_frames.max(other.max_frames);
        self.measure_checks += other.measure_checks;
        self.measure_violations += other.measure_violations;
    }
}

/// How the search packages its result. The witness strategy builds real
/// derivations and models; the decide strategy replaces them by `()`.
pub trait Evidence {
    type Proof;
    type Model;

    fn conflict() -> Self::Proof;
    fn unit(lit: Literal, sub: Self::Proof) -> Self::Proof;
    fn elim(clause: &Clause, lit: Literal, sub: Self::Proof) -> Self::Proof;
    fn red(clause: &Clause, lit: Literal, sub: Self::Proof) -> Self::Proof;
    fn split(lit: Literal, left: Self::Proof, right: Self::Proof) -> Self::Proof;
    fn model(g: &Valuation) -> Self::Model;
}

pub struct WitnessEvidence;

impl Evidence for WitnessEvidence {
    type Proof = DpllDerivation;
    type Model = Assignment;

    fn conflict() -> DpllDerivation {
        DpllDerivation::Conflict
    }

    fn unit(lit: Literal, sub: DpllDerivation) -> DpllDerivation {
        DpllDerivation::unit(lit, sub)
    }

    fn elim(clause: &Clause, lit: Literal, sub: DpllDerivation) -> DpllDerivation {
        DpllDerivation::elim(clause.clone(), lit, sub)
    }

    fn red(clause: &Clause, lit: Literal, sub: DpllDerivation) -> DpllDerivation {
        DpllDerivation::red(clause.clone(), lit, sub)
    }

    fn split(lit: Literal, left: DpllDerivation, right: DpllDerivation) -> DpllDerivation {
        DpllDerivation::split(lit, left, right)
    }

    fn model(g: &Valuation) -> Assignment {
        model_of(g)
    }
}

pub struct DecideEvidence;

impl Evidence for DecideEvidence {
    type Proof = ();
    type Model = ();

    fn conflict() {}
    fn unit(_: Literal, _: ()) {}
    fn elim(_: &Clause, _: Literal, _: ()) {}
    fn red(_: &Clause, _: Literal, _: ()) {}
    fn split(_: Literal, _: (), _: ()) {}
    fn model(_: &Valuation) {}
}

pub enum Outcome<E: Evidence> {
    Sat(E::Model),
    Unsat(E::Proof),
}

enum Frame<E: Evidence> {
    Unit(Literal),
    Elim(Clause, Literal),
    Red(Clause, Literal),
    SplitLeft {
        lit: Literal,
        valuation: Valuation,
        clean: Vec<Clause>,
        key: Option<MeasureKey>,
    },
    SplitRight {
        lit: Literal,
        left: E::Proof,
    },
}

enum Step<E: Evidence> {
    Continue,
    Sat,
    Unsat(E::Proof),
}

type MeasureKey = (usize, usize);

struct State {
    g: Valuation,
    d: VecDeque<Clause>,
    t: Vec<Clause>,
}

impl State {
    fn key(&self) -> MeasureKey {
        let d: Formula = self.d.iter().cloned().collect();
        let t: Formula = self.t.iter().cloned().collect();
        (measure(&self.g, &d, &t), self.d.len())
    }

    fn holds(&self, c: &Clause) -> bool {
        self.d.contains(c) || self.t.contains(c)
    }
}

#[derive(Debug, Default)]
pub struct Solver {
    cfg: SolverConfig,
    stats: SolveStats,
}

impl Solver {
    pub fn new(cfg: SolverConfig) -> Solver {
        Solver {
            cfg,
            stats: SolveStats::default(),
        }
    }

    pub fn config(&self) -> &SolverConfig {
        &self.cfg
    }

    /// Statistics accumulated over every call on this solver.
    pub fn stats(&self) -> &SolveStats {
        &self.stats
    }

    /// Decides `d` in the configured mode, starting from `(∅, d, ∅)`.
    pub fn solve(&mut self, d: &Formula) -> Answer {
        match self.cfg.mode {
            Mode::Witness => Answer::Witness(self.solve_witness(d)),
            Mode::Decide => Answer::Decision(self.decide(d)),
        }
    }

    pub fn solve_witness(&mut self, d: &Formula) -> Verdict {
        let state = State {
            g: Valuation::new(),
            d: d.iter().cloned().collect(),
            t: Vec::new(),
        };
        into_verdict(self.run::<WitnessEvidence>(state))
    }

    pub fn decide(&mut self, d: &Formula) -> bool {
        let state = State {
            g: Valuation::new(),
            d: d.iter().cloned().collect(),
            t: Vec::new(),
        };
        matches!(self.run::<DecideEvidence>(state), Outcome::Sat(()))
    }

    /// Runs the search from an arbitrary state `(g, d, t)`.
    ///
    /// Requires `∅ ∉ t`, `g` consistent and `vars(g) ∩ vars(t) = ∅`. Clauses
    /// of `d` that also occur in `t` are dropped from `d`. On `Unsat(p)`,
    /// `p` derives `g ⊢ d ∪ t`; on `Sat(m)`, `m` satisfies `g`, `d` and `t`.
    pub fn solve_aux(
        &mut self,
        g: &Valuation,
        d: &Formula,
        t: &Formula,
    ) -> Result<Verdict, SolverError> {
        self.solve_aux_with::<WitnessEvidence>(g, d, t)
            .map(into_verdict)
    }

    pub fn solve_aux_with<E: Evidence>(
        &mut self,
        g: &Valuation,
        d: &Formula,
        t: &Formula,
    ) -> Result<Outcome<E>, SolverError> {
        if t.contains_empty_clause() {
            return Err(SolverError::EmptyCleanClause);
        }
        if !g.is_consistent() {
            return Err(SolverError::InconsistentValuation(g.clone()));
        }
        if !vars_of(g).is_disjoint(&vars_of(t)) {
            return Err(SolverError::CleanClauseTouchesValuation);
        }
        let state = State {
            g: g.clone(),
            d: d.iter().filter(|c| !t.contains(c)).cloned().collect(),
            t: t.clauses().to_vec(),
        };
        Ok(self.run::<E>(state))
    }

    fn run<E: Evidence>(&mut self, mut st: State) -> Outcome<E> {
        let mut frames: Vec<Frame<E>> = Vec::new();
        let mut key = self.cfg.assert_measure.then(|| st.key());
        self.stats.steps += 1;
        loop {
            let proof = match self.step::<E>(&mut st, &mut frames, key) {
                Step::Continue => {
                    self.transition(&st, &mut key);
                    self.stats.max_frames = self.stats.max_frames.max(frames.len());
                    continue;
                }
                Step::Sat => return Outcome::Sat(E::model(&st.g)),
                Step::Unsat(p) => p,
            };
            let mut proof = Some(proof);
            loop {
                let p = proof.take().expect("pending proof");
                match frames.pop() {
                    None => return Outcome::Unsat(p),
                    Some(Frame::Unit(l)) => proof = Some(E::unit(l, p)),
                    Some(Frame::Elim(c, l)) => proof = Some(E::elim(&c, l, p)),
                    Some(Frame::Red(c, l)) => proof = Some(E::red(&c, l, p)),
                    Some(Frame::SplitRight { lit, left }) => {
                        proof = Some(E::split(lit, left, p));
                    }
                    Some(Frame::SplitLeft {
                        lit,
                        valuation,
                        clean,
                        key: parent,
                    }) => {
                        if self.cfg.trace {
                            log::trace!("split {lit}: left refuted, trying {}", lit.complement());
                        }
                        frames.push(Frame::SplitRight { lit, left: p });
                        st.g = valuation;
                        st.g.insert(lit.complement());
                        st.d = clean.into();
                        st.t = Vec::new();
                        key = parent;
                        self.transition(&st, &mut key);
                        break;
                    }
                }
            }
        }
    }

    fn transition(&mut self, st: &State, key: &mut Option<MeasureKey>) {
        self.stats.steps += 1;
        if let Some(prev) = *key {
            let next = st.key();
            self.stats.measure_checks += 1;
            if next >= prev {
                self.stats.measure_violations += 1;
                log::error!("measure did not decrease: {prev:?} -> {next:?}");
            }
            *key = Some(next);
        }
    }

    fn step<E: Evidence>(
        &mut self,
        st: &mut State,
        frames: &mut Vec<Frame<E>>,
        key: Option<MeasureKey>,
    ) -> Step<E> {
        let trace = self.cfg.trace;
        let Some(c) = st.d.pop_front() else {
            if st.t.is_empty() {
                if trace {
                    log::trace!("model from {:?}", st.g);
                }
                return Step::Sat;
            }
            let lit = st.t[0].literals()[0];
            if trace {
                log::trace!("split on {lit}");
            }
            self.stats.splits += 1;
            frames.push(Frame::SplitLeft {
                lit,
                valuation: st.g.clone(),
                clean: st.t.clone(),
                key,
            });
            st.g.insert(lit);
            st.d = std::mem::take(&mut st.t).into();
            return Step::Continue;
        };

        if let Some(l) = st.g.first_common(&c) {
            if trace {
                log::trace!("elim {c:?} via {l}");
            }
            frames.push(Frame::Elim(c, l));
            return Step::Continue;
        }
        match c.len() {
            0 => {
                if trace {
                    log::trace!("conflict");
                }
                Step::Unsat(E::conflict())
            }
            1 => {
                let l = c.literals()[0];
                if st.g.contains(l.complement()) {
                    if trace {
                        log::trace!("red {c:?} via {} then conflict", l.complement());
                    }
                    return Step::Unsat(E::red(&c, l.complement(), E::conflict()));
                }
                if trace {
                    log::trace!("unit {l}");
                }
                frames.push(Frame::Unit(l));
                st.g.insert(l);
                let clean = std::mem::take(&mut st.t);
                st.d.extend(clean);
                Step::Continue
            }
            _ => {
                let reducible = c.iter().find(|l| st.g.contains(l.complement()));
                if let Some(l) = reducible {
                    let reduced = c.without(l);
                    if trace {
                        log::trace!("red {c:?} via {} to {reduced:?}", l.complement());
                    }
                    if !st.holds(&reduced) {
                        st.d.push_back(reduced);
                    }
                    frames.push(Frame::Red(c, l.complement()));
                } else {
                    if trace {
                        log::trace!("clean {c:?}");
                    }
                    st.t.push(c);
                }
                Step::Continue
            }
        }
    }
}

fn into_verdict(o: Outcome<WitnessEvidence>) -> Verdict {
    match o {
        Outcome::Sat(m) => Verdict::Sat(m),
        Outcome::Unsat(p) => Verdict::Unsat(p),
    }
}

fn model_of(g: &Valuation) -> Assignment {
    let mut m = Assignment::default();
    for l in g.iter() {
        m.set(l.var(), l.is_positive());
    }
    m
}

/// Decides `d` with a fresh solver.
pub fn solve(d: &Formula, cfg: SolverConfig) -> Answer {
    Solver::new(cfg).solve(d)
}

/// Runs the search from `(g, d, t)` with the default configuration.
pub fn solve_aux(g: &Valuation, d: &Formula, t: &Formula) -> Result<Verdict, SolverError> {
    Solver::new(SolverConfig::default()).solve_aux(g, d, t)
}

/// The assignment making every literal of `g` true; other variables take the
/// default polarity (true).
pub fn complete_model(g: &Valuation) -> Result<Assignment, SolverError> {
    if !g.is_consistent() {
        return Err(SolverError::InconsistentValuation(g.clone()));
    }
    Ok(model_of(g))
}

/// First literal of the first clean clause.
pub fn choose_split(t: &Formula) -> Result<Literal, SolverError> {
    let first = t.clauses().first().ok_or(SolverError::NothingToSplit)?;
    first
        .literals()
        .first()
        .copied()
        .ok_or(SolverError::EmptyCleanClause)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::Variable;
    use crate::dpll_proof::check_dpll;
    use crate::oracle;

    fn lit(k: i64) -> Literal {
        Literal::from_dimacs(k).unwrap()
    }

    fn var(i: u32) -> Variable {
        Variable::new(i).unwrap()
    }

    fn php21() -> Formula {
        Formula::from_dimacs(&[&[1], &[2], &[-1, -2]])
    }

    #[test]
    fn php21_golden_derivation() {
        let v = Solver::new(SolverConfig::default()).solve_witness(&php21());
        let expected = DpllDerivation::unit(
            lit(1),
            DpllDerivation::unit(
                lit(2),
                DpllDerivation::red(
                    Clause::from_dimacs(&[-1, -2]),
                    lit(1),
                    DpllDerivation::red(
                        Clause::from_dimacs(&[-2]),
                        lit(2),
                        DpllDerivation::Conflict,
                    ),
                ),
            ),
        );
        assert_eq!(v, Verdict::Unsat(expected));
    }

    #[test]
    fn php21_never_splits() {
        let mut s = Solver::new(SolverConfig::default());
        s.solve_witness(&php21());
        assert_eq!(s.stats().splits, 0);
    }

    #[test]
    fn empty_formula_gives_default_model() {
        let v = solve(&Formula::new(), SolverConfig::default());
        assert_eq!(v, Answer::Witness(Verdict::Sat(Assignment::default())));
        assert_eq!(solve(&Formula::new(), SolverConfig::decide()), Answer::Decision(true));
    }

    #[test]
    fn php22_model_is_valid() {
        // pigeons 1,2 and holes 1,2: v(i,k) = 2(i-1)+k
        let f = Formula::from_dimacs(&[&[1, 2], &[3, 4], &[-1, -3], &[-2, -4]]);
        let v = Solver::new(SolverConfig::default()).solve_witness(&f);
        assert!(v.model().unwrap().eval(&f));
    }

    #[test]
    fn conflict_from_context() {
        let g = Valuation::from_dimacs(&[1, 2]);
        let d = Formula::from_clauses([Clause::empty()]);
        assert_eq!(
            solve_aux(&g, &d, &Formula::new()).unwrap(),
            Verdict::Unsat(DpllDerivation::Conflict)
        );
    }

    #[test]
    fn clean_only_state_agrees_with_oracle() {
        let t = Formula::from_dimacs(&[&[1, 2], &[-1]]);
        let v = solve_aux(&Valuation::new(), &Formula::new(), &t).unwrap();
        assert!(oracle::compatible(&Valuation::new(), &t).unwrap().is_sat());
        assert!(v.model().unwrap().eval(&t));
    }

    #[test]
    fn elim_path_to_model() {
        let g = Valuation::from_dimacs(&[5]);
        let d = Formula::from_dimacs(&[&[5, 1]]);
        let v = solve_aux(&g, &d, &Formula::new()).unwrap();
        let m = v.model().unwrap();
        assert!(m.value(lit(5)));
        assert!(m.eval(&d));
    }

    #[test]
    fn split_literal_refutation() {
        let f = Formula::from_dimacs(&[&[1, 2], &[1, -2], &[-1, 2], &[-1, -2]]);
        let mut s = Solver::new(SolverConfig::default().with_measure_assertions());
        let v = s.solve_witness(&f);
        let p = v.proof().unwrap();
        assert!(matches!(p, DpllDerivation::Split { .. }));
        assert!(check_dpll(&Valuation::new(), &f, p).is_valid());
        assert_eq!(s.stats().measure_violations, 0);
        assert!(s.stats().measure_checks > 0);
        assert!(!Solver::new(SolverConfig::decide()).decide(&f));
    }

    #[test]
    fn preconditions_rejected() {
        let g = Valuation::from_dimacs(&[1]);
        let t = Formula::from_dimacs(&[&[-1, 2]]);
        assert_eq!(
            solve_aux(&g, &Formula::new(), &t),
            Err(SolverError::CleanClauseTouchesValuation)
        );
        assert_eq!(
            solve_aux(&Valuation::new(), &Formula::new(), &Formula::from_clauses([Clause::empty()])),
            Err(SolverError::EmptyCleanClause)
        );
        assert!(matches!(
            solve_aux(&Valuation::from_dimacs(&[1, -1]), &Formula::new(), &Formula::new()),
            Err(SolverError::InconsistentValuation(_))
        ));
    }

    #[test]
    fn complete_model_examples() {
        let m = complete_model(&Valuation::from_dimacs(&[1, -2])).unwrap();
        assert!(m.var_value(var(1)));
        assert!(!m.var_value(var(2)));
        assert_eq!(complete_model(&Valuation::new()).unwrap(), Assignment::default());
        let m = complete_model(&Valuation::from_dimacs(&[-7])).unwrap();
        assert!(!m.value(lit(7)));
        assert!(complete_model(&Valuation::from_dimacs(&[3, -3])).is_err());
    }

    #[test]
    fn choose_split_examples() {
        assert_eq!(
            choose_split(&Formula::from_dimacs(&[&[3, 4], &[-3]])).unwrap(),
            lit(3)
        );
        assert_eq!(choose_split(&Formula::from_dimacs(&[&[-2]])).unwrap(), lit(-2));
        assert_eq!(choose_split(&Formula::new()), Err(SolverError::NothingToSplit));
    }

    #[test]
    fn deterministic() {
        let f = Formula::from_dimacs(&[&[1, 2, 3], &[-1, -2], &[-2, -3], &[-1, -3], &[2, 3], &[1, 3]]);
        let a = Solver::new(SolverConfig::default()).solve_witness(&f);
        let b = Solver::new(SolverConfig::default()).solve_witness(&f);
        assert_eq!(a, b);
    }
}
