use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn eiscurve(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eiscurve")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const W1: &str = r#"{ "p": 5, "chi": {"modulus": 1, "exponents": [], "order": 1}, "j": 1,
  "sigma": [7, 5, "inf"], "conditions": { "7": "full", "5": "crystalline", "inf": "zero" } }"#;

const REP: &str = r#"{ "p": 3, "generators": [ [["1","1"],["0","1"]], [["1","0"],["3","1"]] ], "labels": ["M1","M2"] }"#;

/// E2 refined critically at p and ordinarily at l, written to the temp dir.
fn e2_crit_ord(dir: &TempDir, p: u64, l: u64, prec: usize) -> PathBuf {
    let e2 = dir.path().join("e2.json");
    let ord = dir.path().join("ord.json");
    let out = dir.path().join(format!("e2_crit{p}_ord{l}.json"));
    let prec = prec.to_string();
    let (p, l) = (p.to_string(), l.to_string());
    assert!(eiscurve(&["eisenstein", "--e2", "--prec", &prec, "--output", s(&e2)]).status.success());
    assert!(eiscurve(&["refine", "--input", s(&e2), "--mode", "ord", "--p", &l, "--output", s(&ord)]).status.success());
    assert!(eiscurve(&["refine", "--input", s(&ord), "--mode", "crit", "--p", &p, "--output", s(&out)]).status.success());
    out
}

#[test]
fn bernoulli_of_trivial_character() {
    let o = eiscurve(&["bernoulli", "--k", "2", "--modulus", "1", "--char-index", "0"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "1/6\n");
}

#[test]
fn bernoulli_rejects_imprimitive_character() {
    let o = eiscurve(&["bernoulli", "--k", "2", "--modulus", "6", "--char-index", "0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error[NOT_PRIMITIVE]"));
}

#[test]
fn critical_e2_has_u5_eigenvalue_5() {
    let dir = TempDir::new().unwrap();
    let e2 = dir.path().join("e2.json");
    let crit = dir.path().join("e2crit5.json");
    assert!(eiscurve(&["eisenstein", "--e2", "--prec", "200", "--output", s(&e2)]).status.success());
    assert!(eiscurve(&["refine", "--input", s(&e2), "--mode", "crit", "--p", "5", "--output", s(&crit)])
        .status
        .success());
    let o = eiscurve(&["eigencheck", "--op", "U:5", "--input", s(&crit)]);
    assert_eq!(stdout(&o), "eigenvalue: 5\n");
    let o = eiscurve(&["eigencheck", "--op", "U:3", "--input", s(&crit)]);
    assert_eq!(stdout(&o), "not an eigenvector of U:3\n");
}

#[test]
fn eigensystem_file_passes() {
    let dir = TempDir::new().unwrap();
    let f = e2_crit_ord(&dir, 5, 7, 600);
    let system = write(
        &dir,
        "sys.json",
        r#"{ "prime_bound": 13, "entries": [
            {"op": "U:5", "eigenvalue": "5"}, {"op": "U:7", "eigenvalue": "1"},
            {"op": "T:2", "eigenvalue": "3"}, {"op": "T:3", "eigenvalue": "4"},
            {"op": "T:11", "eigenvalue": "12"}, {"op": "T:13", "eigenvalue": "14"} ] }"#,
    );
    let o = eiscurve(&["eigensystem", "--input", s(&f), "--system", s(&system)]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).ends_with("PASS\n"), "{}", stdout(&o));

    let wrong = write(&dir, "bad.json", r#"{ "entries": [ {"op": "U:5", "eigenvalue": "1"} ] }"#);
    let o = eiscurve(&["eigensystem", "--input", s(&f), "--system", s(&wrong), "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["pass"], false);
    assert_eq!(v["outcomes"][0]["found"]["coeffs"][0], "5");
}

#[test]
fn selmer_main_case() {
    let dir = TempDir::new().unwrap();
    let problem = write(&dir, "w1.json", W1);
    let o = eiscurve(&["selmer", "--problem", s(&problem)]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.starts_with("dimension: 1\nledger: 0,0,-1,1,1,0\n"), "{out}");
    assert!(out.contains("class numbers"));

    let o = eiscurve(&["selmer", "--problem", s(&problem), "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["dimension"], 1);
    assert_eq!(v["ledger"].as_array().unwrap().len(), 6);
}

#[test]
fn selmer_unknown_dual_term() {
    let dir = TempDir::new().unwrap();
    let text = W1.replace("\"j\": 1", "\"j\": 0").replace("\"7\": \"full\"", "\"7\": \"zero\"");
    let problem = write(&dir, "p.json", &text);
    let o = eiscurve(&["selmer", "--problem", s(&problem)]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("dimension: -1 + (unknown dual term)\nledger: ?,1,0,-1,0,-1\n"), "{}", stdout(&o));
    let o = eiscurve(&["selmer", "--problem", s(&problem), "--assume-dual", "1"]);
    assert!(stdout(&o).starts_with("dimension: 0\n"), "{}", stdout(&o));
}

#[test]
fn btree_commands() {
    let dir = TempDir::new().unwrap();
    let rep = write(&dir, "rep.json", REP);
    let o = eiscurve(&["btree", "stable-set", "--rep", s(&rep), "--cap", "6"]);
    assert_eq!(
        stdout(&o),
        "[[1,0],[0,1]]  radius 0\n[[1,0],[0,3]]  radius 1\nsegment of length 1 from [[1,0],[0,1]] to [[1,0],[0,3]]\n"
    );
    let o = eiscurve(&["btree", "classify", "--rep", s(&rep), "--vertex", "0,0"]);
    assert!(stdout(&o).ends_with("ReducibleIndecomposable\n"));
    let o = eiscurve(&["btree", "classify", "--rep", s(&rep), "--vertex", "0,0,2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error[UNSTABLE]"));
    for (n, verdict) in [("1", "holds"), ("2", "fails")] {
        let o = eiscurve(&["btree", "index-check", "--rep", s(&rep), "--psi1", "1,1", "--psi2", "1,1", "--n", n, "--words", "6"]);
        assert!(stdout(&o).trim_end().ends_with(verdict), "{}", stdout(&o));
    }
}

#[test]
fn btree_without_anchor() {
    let dir = TempDir::new().unwrap();
    let rep = write(&dir, "rep.json", r#"{ "p": 3, "generators": [ [["1","1/3"],["0","1"]] ] }"#);
    let o = eiscurve(&["btree", "stable-set", "--rep", s(&rep), "--cap", "4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error[NO_ANCHOR]"));
}

#[test]
fn domain_errors_exit_1() {
    let o = eiscurve(&["eisenstein", "--k", "3", "--prec", "10"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error[PARITY]"));

    let dir = TempDir::new().unwrap();
    let e2 = dir.path().join("e2.json");
    assert!(eiscurve(&["eisenstein", "--e2", "--prec", "9", "--output", s(&e2)]).status.success());
    let o = eiscurve(&["hecke", "--input", s(&e2), "--op", "U:5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error[PRECISION]"));
}

#[test]
fn argument_errors_exit_2() {
    assert_eq!(eiscurve(&["bernoulli", "--k", "2"]).status.code(), Some(2));
    assert_eq!(eiscurve(&["selmer", "--bogus"]).status.code(), Some(2));
    let o = eiscurve(&["bernoulli", "--k", "2", "--modulus", "5", "--char-index", "9"]);
    assert_eq!(o.status.code(), Some(2));

    let dir = TempDir::new().unwrap();
    let broken = write(&dir, "broken.json", "{ \"p\": 5, \"chi\": ");
    let o = eiscurve(&["selmer", "--problem", s(&broken)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line"), "{}", stderr(&o));

    let wrong_type = write(&dir, "wrong.json", &W1.replace("\"j\": 1", "\"j\": \"one\""));
    let o = eiscurve(&["selmer", "--problem", s(&wrong_type)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("`j`"), "{}", stderr(&o));
}

#[test]
fn output_is_deterministic() {
    let a = eiscurve(&["eisenstein", "--k", "3", "--chi-mod", "4", "--chi-index", "1", "--prec", "40"]);
    let b = eiscurve(&["eisenstein", "--k", "3", "--chi-mod", "4", "--chi-index", "1", "--prec", "40"]);
    assert!(a.status.success(), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let c = eiscurve(&["characters", "--modulus", "24", "--json"]);
    let d = eiscurve(&["characters", "--modulus", "24", "--json"]);
    assert_eq!(c.stdout, d.stdout);
}

#[test]
fn hecke_reads_stdin() {
    let e2 = eiscurve(&["eisenstein", "--e2", "--prec", "20"]);
    let mut child = Command::new(env!("CARGO_BIN_EXE_eiscurve"))
        .args(["hecke", "--op", "U:2"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    use std::io::Write;
    child.stdin.take().unwrap().write_all(&e2.stdout).unwrap();
    let out = child.wait_with_output().unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["prec"], 10);
    assert_eq!(v["coeffs"][1]["coeffs"][0], "3");
}
