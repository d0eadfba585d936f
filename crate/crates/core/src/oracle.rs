//! Truth-table semantics.
//!
//! This is the trust anchor for every differential test in the crate, so it
//! stays a plain enumeration: no propagation, no pruning, no search order
//! tricks. Assignments over the mentioned variables are visited in ascending
//! binary order with the smallest variable id as the most significant bit
//! (false before true); the first satisfying one is returned.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::cnf::{vars_of, Assignment, Formula, HasVars, Valuation, Variable};

/// Variable cap applied when nothing else is configured.
pub const DEFAULT_CAP: usize = 24;

/// Environment variable overriding the cap for [`Oracle::from_env`].
pub const CAP_ENV_VAR: &str = "DPLLKIT_ORACLE_CAP";

// enumeration index is a u64
const HARD_CAP: usize = 63;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleVerdict {
    Satisfiable(Assignment),
    Unsatisfiable,
}

impl OracleVerdict {
    pub fn is_sat(&self) -> bool {
        matches!(self, OracleVerdict::Satisfiable(_))
    }

    pub fn witness(&self) -> Option<&Assignment> {
        match self {
            OracleVerdict::Satisfiable(m) => Some(m),
            OracleVerdict::Unsatisfiable => None,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("{vars} variables exceed the oracle cap of {cap}")]
    CapExceeded { vars: usize, cap: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Oracle {
    cap: usize,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle { cap: DEFAULT_CAP }
    }
}

impl Oracle {
    /// Caps above 63 are clamped.
    pub fn new(cap: usize) -> Oracle {
        Oracle {
            cap: cap.min(HARD_CAP),
        }
    }

    /// Reads the cap from `DPLLKIT_ORACLE_CAP`, falling back to the default
    /// when it is unset or unparsable.
    pub fn from_env() -> Oracle {
        std::env::var(CAP_ENV_VAR)
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .map(Oracle::new)
            .unwrap_or_default()
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Whether a query over these variables would be answered.
    pub fn within_cap(&self, vars: usize) -> bool {
        vars <= self.cap
    }

    pub fn brute_force_sat(&self, d: &Formula) -> Result<OracleVerdict, OracleError> {
        self.compatible(&Valuation::new(), d)
    }

    /// Is there an assignment satisfying every literal of `g` and every
    /// clause of `d`?
    pub fn compatible(&self, g: &Valuation, d: &Formula) -> Result<OracleVerdict, OracleError> {
        let mut vars = BTreeSet::new();
        g.collect_vars(&mut vars);
        d.collect_vars(&mut vars);
        if vars.len() > self.cap {
            return Err(OracleError::CapExceeded {
                vars: vars.len(),
                cap: self.cap,
            });
        }
        let vars: Vec<Variable> = vars.into_iter().collect();
        let n = vars.len();
        let bit = |v: Variable| -> u64 {
            let i = vars.binary_search(&v).expect("collected variable");
            1u64 << (n - 1 - i)
        };

        // (positive mask, negative mask) per clause; valuation literals are
        // unit clauses
        let mut masks: Vec<(u64, u64)> = Vec::with_capacity(d.len() + g.len());
        for c in d {
            let mut m = (0, 0);
            for l in c.iter() {
                if l.is_positive() {
                    m.0 |= bit(l.var());
                } else {
                    m.1 |= bit(l.var());
                }
            }
            masks.push(m);
        }
        for l in g.iter() {
            masks.push(if l.is_positive() {
                (bit(l.var()), 0)
            } else {
                (0, bit(l.var()))
            });
        }

        for x in 0..(1u64 << n) {
            if masks.iter().all(|&(p, q)| p & x != 0 || q & !x != 0) {
                let mut m = Assignment::default();
                for &v in &vars {
                    m.set(v, x & bit(v) != 0);
                }
                return Ok(OracleVerdict::Satisfiable(m));
            }
        }
        Ok(OracleVerdict::Unsatisfiable)
    }
}

/// [`Oracle::brute_force_sat`] with the default cap.
pub fn brute_force_sat(d: &Formula) -> Result<OracleVerdict, OracleError> {
    Oracle::default().brute_force_sat(d)
}

/// [`Oracle::compatible`] with the default cap.
pub fn compatible(g: &Valuation, d: &Formula) -> Result<OracleVerdict, OracleError> {
    Oracle::default().compatible(g, d)
}

/// Number of distinct variables a `compatible(g, d)` query enumerates.
pub fn query_vars(g: &Valuation, d: &Formula) -> usize {
    let mut vars = vars_of(g);
    d.collect_vars(&mut vars);
    vars.len()
}
