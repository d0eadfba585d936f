//! A DPLL decision procedure that always hands back evidence: a model for
//! satisfiable CNF formulae, a DPLL refutation otherwise. Refutations can be
//! checked independently and translated into resolution refutations that are
//! never larger than the DPLL ones.
//!
//! ```
//! use dpllkit::{gen_php, check_dpll, PhpSpec, Solver, SolverConfig, Valuation, Verdict};
//!
//! let f = gen_php(PhpSpec::new(2, 1).unwrap());
//! match Solver::new(SolverConfig::default()).solve_witness(&f) {
//!     Verdict::Unsat(p) => assert!(check_dpll(&Valuation::new(), &f, &p).is_valid()),
//!     Verdict::Sat(_) => unreachable!(),
//! }
//! ```

pub mod cnf;
pub mod dpll_proof;
pub mod frontend;
pub mod oracle;
pub mod report;
pub mod resolution;
pub mod solver;

pub use cnf::{
    canonicalize, complement, eval, is_consistent, literals_outside, measure, negate_valuation,
    vars_of, weight, Assignment, Clause, Evaluate, Formula, Literal, Valuation, Variable,
};
pub use dpll_proof::{check_dpll, dpll_size, DpllDerivation};
pub use frontend::{
    emit_dimacs, gen_php, parse_dimacs, parse_dpll, parse_res, serialize_dpll, serialize_res,
    PhpSpec,
};
pub use oracle::{brute_force_sat, compatible, Oracle, OracleVerdict};
pub use report::{CheckFailure, CheckReport, FailureContext, Violation};
pub use resolution::{
    check_res, dpll_to_res, lift_clause, refute, res_conclusion, res_size, ResDerivation,
    ResVerdict,
};
pub use solver::{
    choose_split, complete_model, solve, solve_aux, Answer, Mode, SolveStats, Solver,
    SolverConfig, Verdict,
};
