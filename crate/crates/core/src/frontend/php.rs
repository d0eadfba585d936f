//! Pigeonhole formulae.

use thiserror::Error;

use crate::cnf::{Clause, Formula, Literal, Variable};

/// `n` pigeons, `m` holes. Satisfiable iff `n <= m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PhpSpec {
    n: u32,
    m: u32,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("pigeonhole dimensions must be positive and fit the variable range (got {n} pigeons, {m} holes)")]
pub struct PhpSpecError {
    pub n: u32,
    pub m: u32,
}

impl PhpSpec {
    pub fn new(n: u32, m: u32) -> Result<PhpSpec, PhpSpecError> {
        let fits = u64::from(n) * u64::from(m) <= u64::from(Variable::MAX_ID);
        if n == 0 || m == 0 || !fits {
            return Err(PhpSpecError { n, m });
        }
        Ok(PhpSpec { n, m })
    }

    pub fn pigeons(&self) -> u32 {
        self.n
    }

    pub fn holes(&self) -> u32 {
        self.m
    }

    /// "pigeon `i` sits in hole `k`", both 1-based: `(i - 1) * m + k`.
    pub fn var(&self, i: u32, k: u32) -> Variable {
        debug_assert!((1..=self.n).contains(&i) && (1..=self.m).contains(&k));
        Variable::new((i - 1) * self.m + k).expect("index within declared range")
    }

    pub fn name(&self) -> String {
        format!("PHP({},{})", self.n, self.m)
    }

    /// One `c` line per variable recording its `(pigeon, hole)` pair.
    pub fn variable_comments(&self) -> Vec<String> {
        let mut out = vec![format!(
            "pigeonhole {}: variable (i-1)*{}+k means pigeon i sits in hole k",
            self.name(),
            self.m
        )];
        for i in 1..=self.n {
            for k in 1..=self.m {
                out.push(format!("pigeon {i} hole {k} = {}", self.var(i, k)));
            }
        }
        out
    }
}

/// Pigeon clauses `[v(i,1) .. v(i,m)]` for every `i`, then hole clauses
/// `[-v(i,k), -v(j,k)]` for `i < j`, hole-major within each pair of pigeons.
pub fn gen_php(spec: PhpSpec) -> Formula {
    let (n, m) = (spec.n, spec.m);
    let mut clauses = Vec::new();
    for i in 1..=n {
        clauses.push(Clause::canonicalize((1..=m).map(|k| spec.var(i, k).positive())));
    }
    for i in 1..=n {
        for j in i + 1..=n {
            for k in 1..=m {
                let a: Literal = spec.var(i, k).negative();
                let b: Literal = spec.var(j, k).negative();
                clauses.push(Clause::canonicalize([a, b]));
            }
        }
    }
    Formula::from_clauses(clauses)
}
