use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use dpllkit::frontend::dimacs::{emit_dimacs_with_comments, parse_dimacs_with, DimacsOptions};
use dpllkit::frontend::{run_bench, BenchModes, BenchRecord};
use dpllkit::{
    check_dpll, check_res, dpll_to_res, gen_php, parse_dpll, parse_res, serialize_dpll,
    serialize_res, Formula, Oracle, PhpSpec, Solver, SolverConfig, Valuation, Variable, Verdict,
};

// Derivations are trees and every walk over them recurses.
const STACK_BYTES: usize = 1 << 30;

const EXIT_SAT: u8 = 10;
const EXIT_UNSAT: u8 = 20;
const EXIT_INVALID: u8 = 2;
const EXIT_ERROR: u8 = 1;

/// Evidence-producing DPLL solver, proof checkers and translator.
#[derive(Debug, Parser)]
#[command(name = "dpllkit", version)]
struct Cli {
    /// Log every solver step (at trace level, to stderr).
    #[arg(long, global = true)]
    trace: bool,

    /// Accept sloppy DIMACS: wrong counts, unterminated last clause, `%` lines.
    #[arg(long, global = true)]
    lenient: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve a DIMACS instance. Exits 10 if satisfiable, 20 if not.
    Solve {
        #[arg(long, value_enum, default_value_t = ModeArg::Witness)]
        mode: ModeArg,
        /// Refutation format (witness mode only).
        #[arg(long, value_enum, default_value_t = ProofArg::Dpll)]
        proof: ProofArg,
        /// Write the refutation here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        input: PathBuf,
    },
    /// Check a refutation of a DIMACS instance. Exits 0 if valid, 2 if not.
    Check {
        #[arg(value_enum)]
        kind: ProofKind,
        input: PathBuf,
        proof: PathBuf,
    },
    /// Convert between proof formats.
    Convert {
        #[command(subcommand)]
        conversion: Conversion,
    },
    /// Generate an instance.
    Gen {
        #[command(subcommand)]
        family: Family,
    },
    /// Solve and verify the pigeonhole ladder, one TSV row per run.
    Bench {
        #[arg(long, default_value_t = 5)]
        php_max: u32,
        #[arg(long, value_enum, default_value_t = BenchModeArg::Both)]
        mode: BenchModeArg,
    },
}

#[derive(Debug, Subcommand)]
enum Conversion {
    /// Translate a DPLL derivation into a resolution trace.
    Dpll2res {
        input: PathBuf,
        proof: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
enum Family {
    /// Pigeonhole principle: N pigeons, M holes.
    Php {
        n: u32,
        m: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Witness,
    Decide,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProofArg {
    Dpll,
    Res,
    None,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ProofKind {
    Dpll,
    Res,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BenchModeArg {
    Witness,
    Decide,
    Both,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_ERROR)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    init_logging(cli.trace);
    let worker = std::thread::Builder::new()
        .stack_size(STACK_BYTES)
        .spawn(move || run(&cli));
    let outcome = match worker {
        Ok(handle) => handle.join().unwrap_or_else(|_| Err(anyhow::anyhow!("worker panicked"))),
        Err(e) => Err(e.into()),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn init_logging(trace: bool) {
    let default = if trace { "trace" } else { "warn" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(default))
        .format_timestamp(None)
        .init();
}

fn run(cli: &Cli) -> Result<u8> {
    let opts = DimacsOptions { strict: !cli.lenient };
    match &cli.command {
        Command::Solve {
            mode,
            proof,
            out,
            input,
        } => solve(cli.trace, opts, *mode, *proof, out.as_deref(), input),
        Command::Check { kind, input, proof } => check(opts, *kind, input, proof),
        Command::Convert {
            conversion: Conversion::Dpll2res { input, proof, out },
        } => convert(opts, input, proof, out.as_deref()),
        Command::Gen {
            family: Family::Php { n, m, out },
        } => {
            let spec = PhpSpec::new(*n, *m)?;
            let text = emit_dimacs_with_comments(&gen_php(spec), &spec.variable_comments());
            emit(out.as_deref(), &text)?;
            Ok(0)
        }
        Command::Bench { php_max, mode } => bench(*php_max, *mode),
    }
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

/// Reads an instance; returns the formula and the number of variables to
/// report in a model line.
fn read_cnf(opts: DimacsOptions, path: &Path) -> Result<(Formula, u64)> {
    let bytes = fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
    let parsed = parse_dimacs_with(&bytes, opts).with_context(|| format!("{}", path.display()))?;
    for w in &parsed.warnings {
        log::warn!("{}: {w}", path.display());
    }
    let vars = parsed.declared_vars.max(u64::from(parsed.formula.max_var()));
    Ok((parsed.formula, vars))
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(path) => fs::write(path, bytes).with_context(|| format!("cannot write {}", path.display())),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn solve(
    trace: bool,
    opts: DimacsOptions,
    mode: ModeArg,
    proof: ProofArg,
    out: Option<&Path>,
    input: &Path,
) -> Result<u8> {
    let (f, vars) = read_cnf(opts, input)?;
    let cfg = match mode {
        ModeArg::Witness => SolverConfig::witness(),
        ModeArg::Decide => SolverConfig::decide(),
    };
    let mut solver = Solver::new(SolverConfig { trace, ..cfg });

    if let ModeArg::Decide = mode {
        if proof != ProofArg::None && out.is_some() {
            bail!("decide mode produces no proof; drop --out or use --mode witness");
        }
        let sat = solver.decide(&f);
        println!("{}", if sat { "s SATISFIABLE" } else { "s UNSATISFIABLE" });
        return Ok(if sat { EXIT_SAT } else { EXIT_UNSAT });
    }

    match solver.solve_witness(&f) {
        Verdict::Sat(m) => {
            let mut line = String::from("v");
            for id in 1..=vars {
                let var = u32::try_from(id).ok().and_then(Variable::new).context("variable out of range")?;
                let value = m.var_value(var);
                line.push_str(&format!(" {}{id}", if value { "" } else { "-" }));
            }
            println!("s SATISFIABLE\n{line} 0");
            Ok(EXIT_SAT)
        }
        Verdict::Unsat(p) => {
            println!("s UNSATISFIABLE");
            let text = match proof {
                ProofArg::None => return Ok(EXIT_UNSAT),
                ProofArg::Dpll => format!("{}\n", serialize_dpll(&p)),
                ProofArg::Res => serialize_res(&dpll_to_res(&Valuation::new(), &f, &p)?),
            };
            emit(out, text.as_bytes())?;
            Ok(EXIT_UNSAT)
        }
    }
}

fn check(opts: DimacsOptions, kind: ProofKind, input: &Path, proof: &Path) -> Result<u8> {
    let (f, _) = read_cnf(opts, input)?;
    let text = read_text(proof)?;
    let invalid = |why: String| {
        eprintln!("invalid: {why}");
        Ok(EXIT_INVALID)
    };
    let size = match kind {
        ProofKind::Dpll => {
            let p = match parse_dpll(&text) {
                Ok(p) => p,
                Err(e) => return invalid(format!("malformed derivation: {e}")),
            };
            if let Some(failure) = check_dpll(&Valuation::new(), &f, &p).failure() {
                return invalid(failure.to_string());
            }
            p.size()
        }
        ProofKind::Res => {
            let r = match parse_res(&text) {
                Ok(r) => r,
                Err(e) => return invalid(format!("malformed trace: {e}")),
            };
            if let Some(failure) = check_res(&f, &r).failure() {
                return invalid(failure.to_string());
            }
            if !r.conclusion().is_empty() {
                return invalid(format!(
                    "not a refutation: conclusion is {:?}, not the empty clause",
                    r.conclusion()
                ));
            }
            r.size()
        }
    };
    println!("valid (size {size})");
    Ok(0)
}

fn convert(opts: DimacsOptions, input: &Path, proof: &Path, out: Option<&Path>) -> Result<u8> {
    let (f, _) = read_cnf(opts, input)?;
    let p = parse_dpll(&read_text(proof)?).context("malformed derivation")?;
    let r = dpll_to_res(&Valuation::new(), &f, &p)?;
    if r.size() > p.size() {
        bail!("translation grew the proof from {} to {}", p.size(), r.size());
    }
    emit(out, serialize_res(&r).as_bytes())?;
    eprintln!("dpll_size={} res_size={}", p.size(), r.size());
    Ok(0)
}

fn bench(php_max: u32, mode: BenchModeArg) -> Result<u8> {
    let modes = match mode {
        BenchModeArg::Witness => BenchModes::Witness,
        BenchModeArg::Decide => BenchModes::Decide,
        BenchModeArg::Both => BenchModes::Both,
    };
    let records = run_bench(php_max, modes, &Oracle::from_env())?;
    let mut stdout = io::stdout().lock();
    writeln!(stdout, "{}", BenchRecord::HEADER)?;
    for r in &records {
        writeln!(stdout, "{r}")?;
    }
    Ok(0)
}
