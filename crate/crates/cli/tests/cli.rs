use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn dpllkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dpllkit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn gen(dir: &TempDir, n: u32, m: u32) -> PathBuf {
    let p = dir.path().join(format!("php_{n}_{m}.cnf"));
    let o = dpllkit(&["gen", "php", &n.to_string(), &m.to_string(), "--out", s(&p)]);
    assert!(o.status.success(), "{}", stderr(&o));
    p
}

#[test]
fn gen_writes_commented_dimacs() {
    let o = dpllkit(&["gen", "php", "2", "1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("c pigeonhole PHP(2,1)"));
    assert!(text.ends_with("p cnf 2 3\n1 0\n2 0\n-1 -2 0\n"), "{text}");
}

#[test]
fn solve_unsat_emits_checkable_proofs() {
    let dir = TempDir::new().unwrap();
    let cnf = gen(&dir, 2, 1);
    let proof = dir.path().join("p.dpll");
    let o = dpllkit(&["solve", s(&cnf), "--out", s(&proof)]);
    assert_eq!(o.status.code(), Some(20));
    assert_eq!(stdout(&o), "s UNSATISFIABLE\n");
    assert_eq!(
        fs::read_to_string(&proof).unwrap(),
        "(unit 1 (unit 2 (red [ -1 -2 ] 1 (red [ -2 ] 2 conflict))))\n"
    );
    let o = dpllkit(&["check", "dpll", s(&cnf), s(&proof)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));

    let trace = dir.path().join("p.res");
    let o = dpllkit(&["convert", "dpll2res", s(&cnf), s(&proof), "--out", s(&trace)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stderr(&o).trim(), "dpll_size=4 res_size=2");
    let o = dpllkit(&["check", "res", s(&cnf), s(&trace)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));

    let o = dpllkit(&["solve", "--proof", "res", s(&cnf)]);
    assert_eq!(o.status.code(), Some(20));
    assert_eq!(stdout(&o), format!("s UNSATISFIABLE\n{}", fs::read_to_string(&trace).unwrap()));
}

#[test]
fn solve_sat_prints_model() {
    let dir = TempDir::new().unwrap();
    let cnf = write(&dir, "f.cnf", "p cnf 3 2\n-1 0\n1 2 0\n");
    let o = dpllkit(&["solve", s(&cnf)]);
    assert_eq!(o.status.code(), Some(10));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("s SATISFIABLE"));
    let v: Vec<i64> = lines.next().unwrap()[1..]
        .split_whitespace()
        .map(|t| t.parse().unwrap())
        .collect();
    assert_eq!(v.len(), 4);
    assert_eq!(v[3], 0);
    assert!(v.contains(&-1) && v.contains(&2));

    let o = dpllkit(&["solve", "--mode", "decide", s(&cnf)]);
    assert_eq!(o.status.code(), Some(10));
    assert_eq!(stdout(&o), "s SATISFIABLE\n");
}

#[test]
fn decide_mode_agrees() {
    let dir = TempDir::new().unwrap();
    let cnf = gen(&dir, 4, 3);
    let o = dpllkit(&["solve", "--mode", "decide", s(&cnf)]);
    assert_eq!(o.status.code(), Some(20));
    assert_eq!(stdout(&o), "s UNSATISFIABLE\n");
}

#[test]
fn tampered_proofs_are_rejected() {
    let dir = TempDir::new().unwrap();
    let cnf = gen(&dir, 2, 1);
    let bad = write(&dir, "bad.dpll", "(unit 1 (unit 2 (elim [ -1 -2 ] 1 conflict)))\n");
    let o = dpllkit(&["check", "dpll", s(&cnf), s(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("literal-not-in-clause at node /0/0"), "{}", stderr(&o));

    let garbage = write(&dir, "garbage.dpll", "(unit 1\n");
    let o = dpllkit(&["check", "dpll", s(&cnf), s(&garbage)]);
    assert_eq!(o.status.code(), Some(2));

    let bad = write(&dir, "bad.res", "1 S 3 -1 -2 0\n2 S 1 1 0\n3 R 2 1 2 -1 0\n");
    let o = dpllkit(&["check", "res", s(&cnf), s(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("pivot-not-in-right"), "{}", stderr(&o));

    // a sound derivation that is not a refutation
    let partial = write(&dir, "partial.res", "1 S 3 -1 -2 0\n2 S 2 2 0\n3 R 2 1 2 -1 0\n");
    let o = dpllkit(&["check", "res", s(&cnf), s(&partial)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("not a refutation"));
}

#[test]
fn dimacs_strictness() {
    let dir = TempDir::new().unwrap();
    let sloppy = write(&dir, "sloppy.cnf", "p cnf 2 5\n1 0\n-1 2 0\n%\n0\n");
    let o = dpllkit(&["solve", s(&sloppy)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("error"));
    let o = dpllkit(&["--lenient", "solve", s(&sloppy)]);
    assert_eq!(o.status.code(), Some(10), "{}", stderr(&o));
}

#[test]
fn bench_prints_tsv() {
    let o = dpllkit(&["bench", "--php-max", "2", "--mode", "witness"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    let rows: Vec<&str> = out.lines().collect();
    assert_eq!(rows.len(), 5);
    assert!(rows[0].starts_with("instance\tmode\tverdict"));
    assert!(rows[2].starts_with("PHP(2,1)\twitness\tUNSAT\t4\t2\t"));
}

#[test]
fn usage_errors() {
    assert_eq!(dpllkit(&[]).status.code(), Some(1));
    assert_eq!(dpllkit(&["gen", "php", "0", "3"]).status.code(), Some(1));
    assert_eq!(dpllkit(&["solve", "/nonexistent.cnf"]).status.code(), Some(1));
    assert_eq!(dpllkit(&["--version"]).status.code(), Some(0));
}
