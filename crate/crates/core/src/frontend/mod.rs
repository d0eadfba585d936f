//! Everything that talks to the outside world: DIMACS, proof text formats,
//! pigeonhole instances and the benchmark harness.

pub mod bench;
pub mod dimacs;
pub mod format;
pub mod php;

pub use bench::{run_bench, BenchError, BenchModes, BenchRecord};
pub use dimacs::{emit_dimacs, parse_dimacs, parse_dimacs_with, Dimacs, DimacsError, DimacsOptions};
pub use format::{parse_dpll, parse_res, serialize_dpll, serialize_res, ProofParseError};
pub use php::{gen_php, PhpSpec};
