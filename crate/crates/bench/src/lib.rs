//! Fixtures shared by the criterion benches.

use dpllkit::{dpll_to_res, gen_php, DpllDerivation, Formula, PhpSpec, Solver, SolverConfig, Valuation, Verdict};

/// `PHP(n, m)`.
pub fn php(n: u32, m: u32) -> Formula {
    gen_php(PhpSpec::new(n, m).expect("positive dimensions"))
}

/// The witness-mode refutation of an unsatisfiable instance.
pub fn refutation(f: &Formula) -> DpllDerivation {
    match Solver::new(SolverConfig::witness()).solve_witness(f) {
        Verdict::Unsat(p) => p,
        Verdict::Sat(_) => panic!("instance is satisfiable"),
    }
}

/// Checks that the fixture translates; panics otherwise.
pub fn assert_translates(f: &Formula, p: &DpllDerivation) {
    let r = dpll_to_res(&Valuation::new(), f, p).expect("valid refutation");
    assert!(r.size() <= p.size());
}
