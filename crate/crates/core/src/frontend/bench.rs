//! Pigeonhole benchmark harness.
//!
//! Runs `PHP(k,k)` and `PHP(k+1,k)` for `k = 1..=max`, verifies every answer
//! (models are evaluated, refutations go through both checkers, the
//! resolution translation must not grow the proof, and verdicts must match
//! the truth-table oracle when the instance is small enough) and reports one
//! [`BenchRecord`] per instance and mode.

use std::fmt;
use std::time::{Duration, Instant};

use thiserror::Error;

use super::php::{gen_php, PhpSpec};
use crate::dpll_proof::check_dpll;
use crate::oracle::Oracle;
use crate::resolution::{check_res, dpll_to_res};
use crate::solver::{Mode, Solver, SolverConfig, Verdict};
use crate::cnf::{vars_of, Formula, Valuation};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchModes {
    Witness,
    Decide,
    Both,
}

impl BenchModes {
    fn modes(self) -> &'static [Mode] {
        match self {
            BenchModes::Witness => &[Mode::Witness],
            BenchModes::Decide => &[Mode::Decide],
            BenchModes::Both => &[Mode::Witness, Mode::Decide],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub instance: String,
    pub mode: Mode,
    pub sat: bool,
    pub dpll_size: Option<usize>,
    pub res_size: Option<usize>,
    pub solve_ms: f64,
    pub check_dpll_ms: Option<f64>,
    pub check_res_ms: Option<f64>,
}

impl BenchRecord {
    pub const HEADER: &'static str =
        "instance\tmode\tverdict\tdpll_size\tres_size\tsolve_ms\tcheck_dpll_ms\tcheck_res_ms";
}

fn opt<T: fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map_or_else(|| "-".to_string(), T::to_string)
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

impl fmt::Display for BenchRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mode = match self.mode {
            Mode::Witness => "witness",
            Mode::Decide => "decide",
        };
        write!(
            f,
            "{}\t{}\t{}\t{}\t{}\t{:.3}\t{}\t{}",
            self.instance,
            mode,
            if self.sat { "SAT" } else { "UNSAT" },
            opt(&self.dpll_size),
            opt(&self.res_size),
            self.solve_ms,
            opt(&self.check_dpll_ms.map(|x| format!("{x:.3}"))),
            opt(&self.check_res_ms.map(|x| format!("{x:.3}"))),
        )
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("{instance}: {detail}")]
pub struct BenchError {
    pub instance: String,
    pub detail: String,
}

/// Instances in run order.
pub fn bench_instances(php_max: u32) -> Vec<PhpSpec> {
    (1..=php_max)
        .flat_map(|k| [PhpSpec::new(k, k), PhpSpec::new(k + 1, k)])
        .map(|s| s.expect("positive dimensions"))
        .collect()
}

/// Solves and verifies one instance in one mode.
pub fn bench_one(
    name: &str,
    f: &Formula,
    mode: Mode,
    oracle: &Oracle,
) -> Result<BenchRecord, BenchError> {
    let fail = |detail: String| BenchError {
        instance: name.to_string(),
        detail,
    };
    let mut solver = Solver::new(SolverConfig {
        mode,
        ..SolverConfig::default()
    });
    let start = Instant::now();
    let answer = solver.solve(f);
    let solve_ms = ms(start.elapsed());
    let mut rec = BenchRecord {
        instance: name.to_string(),
        mode,
        sat: answer.is_sat(),
        dpll_size: None,
        res_size: None,
        solve_ms,
        check_dpll_ms: None,
        check_res_ms: None,
    };

    if let crate::solver::Answer::Witness(v) = &answer {
        match v {
            Verdict::Sat(m) => {
                if !m.eval(f) {
                    return Err(fail("model does not satisfy the formula".into()));
                }
            }
            Verdict::Unsat(p) => {
                let start = Instant::now();
                let report = check_dpll(&Valuation::new(), f, p);
                rec.check_dpll_ms = Some(ms(start.elapsed()));
                if let Some(failure) = report.failure() {
                    return Err(fail(format!("DPLL proof rejected: {failure}")));
                }
                let r = dpll_to_res(&Valuation::new(), f, p).map_err(|e| fail(e.to_string()))?;
                let start = Instant::now();
                let report = check_res(f, &r);
                rec.check_res_ms = Some(ms(start.elapsed()));
                if let Some(failure) = report.failure() {
                    return Err(fail(format!("resolution proof rejected: {failure}")));
                }
                if !r.conclusion().is_empty() {
                    return Err(fail("resolution proof does not end in the empty clause".into()));
                }
                rec.dpll_size = Some(p.size());
                rec.res_size = Some(r.size());
                if r.size() > p.size() {
                    return Err(fail(format!(
                        "resolution size {} exceeds DPLL size {}",
                        r.size(),
                        p.size()
                    )));
                }
            }
        }
    }

    if oracle.within_cap(vars_of(f).len()) {
        let expected = oracle
            .brute_force_sat(f)
            .map_err(|e| fail(e.to_string()))?
            .is_sat();
        if expected != rec.sat {
            return Err(fail(format!("solver says sat={}, oracle says sat={expected}", rec.sat)));
        }
    }
    Ok(rec)
}

/// Runs the whole pigeonhole ladder; records come back in instance order,
/// modes in the order witness, decide.
pub fn run_bench(
    php_max: u32,
    modes: BenchModes,
    oracle: &Oracle,
) -> Result<Vec<BenchRecord>, BenchError> {
    let mut out = Vec::new();
    for spec in bench_instances(php_max) {
        let f = gen_php(spec);
        for &mode in modes.modes() {
            out.push(bench_one(&spec.name(), &f, mode, oracle)?);
        }
    }
    Ok(out)
}
