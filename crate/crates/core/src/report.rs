//! Structured outcome of a proof check, shared by both checkers.

use std::fmt;

use crate::cnf::{Clause, Formula, Valuation};

/// The side condition a checked node failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Violation {
    // DPLL rules
    InconsistentContext,
    EmptyClauseMissing,
    UnitClauseMissing,
    LiteralNotInValuation,
    LiteralNotInClause,
    ComplementNotInClause,
    ClauseNotInFormula,
    // resolution rules
    PremiseIndex,
    Subsumption,
    PivotNotInLeft,
    PivotNotInRight,
    ConclusionMismatch,
}

impl Violation {
    pub fn as_str(self) -> &'static str {
        match self {
            Violation::InconsistentContext => "inconsistent-context",
            Violation::EmptyClauseMissing => "empty-clause-missing",
            Violation::UnitClauseMissing => "unit-clause-missing",
            Violation::LiteralNotInValuation => "literal-not-in-valuation",
            Violation::LiteralNotInClause => "literal-not-in-clause",
            Violation::ComplementNotInClause => "complement-not-in-clause",
            Violation::ClauseNotInFormula => "clause-not-in-formula",
            Violation::PremiseIndex => "premise-index",
            Violation::Subsumption => "subsumption",
            Violation::PivotNotInLeft => "pivot-not-in-left",
            Violation::PivotNotInRight => "pivot-not-in-right",
            Violation::ConclusionMismatch => "conclusion-mismatch",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// What the checker was looking at when a node failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FailureContext {
    /// The reconstructed sequent `Γ ⊢ Δ` at a DPLL node.
    Sequent {
        valuation: Valuation,
        formula: Formula,
    },
    /// The stored conclusion at a resolution node, and the clauses it was
    /// compared against (child conclusions or the cited premise).
    Resolution {
        conclusion: Clause,
        premises: Vec<Clause>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckFailure {
    /// Child indices from the root: 0 for the only child of a unary node,
    /// 0/1 for the left/right child of a binary one.
    pub path: Vec<usize>,
    pub reason: Violation,
    pub context: FailureContext,
}

impl fmt::Display for CheckFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at node /", self.reason)?;
        let path: Vec<String> = self.path.iter().map(usize::to_string).collect();
        write!(f, "{}", path.join("/"))?;
        match &self.context {
            FailureContext::Sequent { valuation, formula } => {
                write!(f, " (valuation {valuation:?}, formula {formula:?})")
            }
            FailureContext::Resolution {
                conclusion,
                premises,
            } => write!(f, " (conclusion {conclusion:?}, premises {premises:?})"),
        }
    }
}

/// Result of checking a derivation. Valid iff there is no failure; the
/// failure, when present, is the first one in left-to-right pre-order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CheckReport {
    failure: Option<CheckFailure>,
}

impl CheckReport {
    pub fn valid() -> CheckReport {
        CheckReport { failure: None }
    }

    pub fn invalid(failure: CheckFailure) -> CheckReport {
        CheckReport {
            failure: Some(failure),
        }
    }

    pub fn is_valid(&self) -> bool {
        self.failure.is_none()
    }

    pub fn failure(&self) -> Option<&CheckFailure> {
        self.failure.as_ref()
    }

    pub fn into_failure(self) -> Option<CheckFailure> {
        self.failure
    }
}

impl From<Result<(), CheckFailure>> for CheckReport {
    fn from(r: Result<(), CheckFailure>) -> Self {
        CheckReport { failure: r.err() }
    }
}
