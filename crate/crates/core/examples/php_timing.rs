//! Solve a pigeonhole instance in both modes and translate the refutation.
//!
//! `cargo run --release --example php_timing -- 6 5`

use std::time::Instant;

use dpllkit::{check_dpll, check_res, dpll_to_res, gen_php, PhpSpec, Solver, SolverConfig, Valuation};

fn main() {
    let args: Vec<u32> = std::env::args().skip(1).map(|a| a.parse().expect("integer")).collect();
    let (n, m) = match args.as_slice() {
        [n, m] => (*n, *m),
        _ => (6, 5),
    };
    let f = gen_php(PhpSpec::new(n, m).expect("positive dimensions"));

    let start = Instant::now();
    let sat = Solver::new(SolverConfig::decide()).decide(&f);
    println!("decide:  sat={sat} in {:?}", start.elapsed());

    let start = Instant::now();
    let mut solver = Solver::new(SolverConfig::witness());
    let v = solver.solve_witness(&f);
    println!("witness: sat={} in {:?} ({:?})", v.is_sat(), start.elapsed(), solver.stats());

    if let Some(p) = v.proof() {
        let start = Instant::now();
        let ok = check_dpll(&Valuation::new(), &f, p).is_valid();
        println!("check_dpll: {ok} in {:?}, size {}", start.elapsed(), p.size());
        let start = Instant::now();
        let r = dpll_to_res(&Valuation::new(), &f, p).expect("valid derivation");
        println!("dpll_to_res in {:?}, size {}", start.elapsed(), r.size());
        let start = Instant::now();
        println!("check_res: {} in {:?}", check_res(&f, &r).is_valid(), start.elapsed());
    }
}
