//! Every subcommand against a frozen output file in `tests/golden/`.
//! Set `TORIC_BLESS=1` to rewrite the files after an intended change.

use std::path::{Path, PathBuf};
use std::process::Command;

const BIN: &str = env!("CARGO_BIN_EXE_toric");

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name).display().to_string()
}

fn golden_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.txt"))
}

fn run(args: &[String]) -> (String, String, i32) {
    let out = Command::new(BIN).args(args).output().expect("binary runs");
    (
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
        out.status.code().unwrap_or(-1),
    )
}

/// Paths inside the data directory are shown relative to it.
fn scrub(s: &str) -> String {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("data").display().to_string();
    s.replace(&dir, "data")
}

fn check(name: &str, args: &[&str], code: i32) {
    let args: Vec<String> = args
        .iter()
        .map(|a| match a.strip_prefix('@') {
            Some(f) => data(f),
            None => a.to_string(),
        })
        .collect();
    let (out, err, got) = run(&args);
    assert_eq!(got, code, "{name}: exit code\nstdout:\n{out}\nstderr:\n{err}");
    let text = scrub(if code == 1 { &err } else { &out });
    let path = golden_path(name);
    if std::env::var_os("TORIC_BLESS").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, &text).unwrap();
        return;
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
    assert_eq!(text, want, "{name}: output differs from {}", path.display());
}

#[test]
fn graph_commands() {
    check("graph-h1", &["graph-h1", "@cycle3.json"], 0);
    check("graph-h1-theta", &["graph-h1", "@theta.json"], 0);
    check("graph-harmonic", &["graph-harmonic", "@cycle3.json", "--cochain", "@beta_c3.json"], 0);
    check("graph-harmonic-json", &["--format", "json", "graph-harmonic", "@theta.json"], 0);
}

#[test]
fn weight_commands() {
    check("tgroups", &["tgroups", "@theta.json"], 0);
    check("monodromy", &["monodromy", "@theta.json"], 0);
    check("consani", &["consani", "@cycle3.json"], 0);
    check("consani-single", &["consani", "@theta.json", "--k", "1", "--r", "1"], 0);
    check("jacobian-reduce", &["jacobian-reduce", "@tate_q25.json", "@x.json"], 0);
    check("jacobian-reduce-rank2", &["jacobian-reduce", "@jac_rank2.json", "@x_rank2.json"], 0);
}

#[test]
fn symbol_commands() {
    check("symbol-tame", &["symbol-tame", "--f", "z", "--g", "z-5", "--at", "5"], 0);
    check(
        "symbol-annulus",
        &["symbol-annulus", "--p", "5", "--f", "z", "--g", "z-5", "--annulus", "0,1"],
        0,
    );
    check(
        "symbol-annulus-reversed",
        &["symbol-annulus", "--p", "7", "--f", "z", "--g", "z-7", "--annulus", "0,1", "--reversed"],
        0,
    );
    check(
        "residue-check",
        &["residue-check", "--f", "z*(z-1)", "--g", "(z-5)*(z-6)", "@boundary.json"],
        0,
    );
}

#[test]
fn mumford_commands() {
    check("mumford-periods-rank1", &["-N", "12", "--slack", "3", "mumford-periods", "@schottky_rank1.json"], 0);
    check("mumford-periods-rank2", &["-N", "12", "--slack", "3", "mumford-periods", "@schottky_rank2.json"], 0);
    check("mumford-residues-rank1", &["-N", "12", "mumford-residues", "@schottky_rank1.json"], 0);
    check("mumford-residues-rank2", &["-N", "12", "--L", "3", "mumford-residues", "@schottky_rank2.json"], 0);
}

#[test]
fn regulator_commands() {
    check("reg-k2-tate", &["-N", "12", "--slack", "3", "reg-k2", "@k2_tate.json"], 0);
    check("reg-k2-disc", &["reg-k2", "@k2_disc.json"], 0);
    check("reg-k2-json", &["--format", "json", "-N", "12", "--slack", "3", "reg-k2", "@k2_tate.json"], 0);
    check("reg-k1", &["-N", "12", "--slack", "3", "reg-k1", "@k1_toy.json"], 0);
}

#[test]
fn failures_and_input_errors() {
    check("error-missing-file", &["graph-h1", "@missing.json"], 1);
    check("error-bad-function", &["symbol-tame", "--f", "z-", "--g", "z", "--at", "0"], 1);
    check("error-not-prime", &["--p", "6", "symbol-tame", "--f", "z", "--g", "z", "--at", "1"], 1);
    check(
        "fail-not-in-k2",
        &["reg-k2", "@k2_bad.json"],
        2,
    );
}

#[test]
fn verify_all_report() {
    check("verify-all", &["verify-all"], 0);
}
