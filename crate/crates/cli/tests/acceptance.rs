//! The ten acceptance criteria, one PASS/FAIL line each.

use std::process::Command;
use std::time::{Duration, Instant};

use toric_cli::verify;
use toric_core::report::CheckLine;

struct Outcome {
    ok: bool,
    detail: String,
}

fn from_lines(lines: &[CheckLine], min_lines: usize) -> Outcome {
    let failed: Vec<&CheckLine> = lines.iter().filter(|l| !l.passed()).collect();
    let ok = failed.is_empty() && lines.len() >= min_lines;
    let detail = match failed.first() {
        Some(l) => format!("{} of {} checks failed, first: {l}", failed.len(), lines.len()),
        None if lines.len() < min_lines => format!("only {} checks, expected {min_lines}", lines.len()),
        None => format!("{} checks", lines.len()),
    };
    Outcome { ok, detail }
}

fn criterion(n: usize, title: &str, limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let mut o = f();
    let elapsed = start.elapsed();
    if let Some(limit) = limit {
        if elapsed > limit {
            o.ok = false;
            o.detail.push_str(&format!(", over the {:.0} s limit", limit.as_secs_f64()));
        }
    }
    let status = if o.ok { "PASS" } else { "FAIL" };
    println!("{status} {n:>2} {title} ({:.2} s): {}", elapsed.as_secs_f64(), o.detail);
    o.ok
}

fn count(lines: &[CheckLine], needle: &str) -> usize {
    lines.iter().filter(|l| l.name.contains(needle)).count()
}

fn verify_all_bytes(threads: Option<usize>) -> Vec<u8> {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_toric"));
    if let Some(t) = threads {
        cmd.args(["--threads", &t.to_string()]);
    }
    let out = cmd.arg("verify-all").output().expect("binary runs");
    assert!(out.status.success(), "verify-all exit status {:?}", out.status);
    out.stdout
}

#[test]
fn acceptance() {
    let secs = Duration::from_secs;
    let mut results = Vec::new();

    results.push(criterion(1, "graph and T-group pipelines agree", Some(secs(5)), || {
        let lines = verify::graph_t_groups();
        let mut o = from_lines(&lines, 16);
        o.detail.push_str(&format!(", {} graphs", count(&lines, "match[")));
        o
    }));

    results.push(criterion(2, "symbol laws on random split data", Some(secs(30)), || {
        let lines = verify::symbol_laws();
        let mut o = from_lines(&lines, 10);
        // 100 configurations per prime
        o.detail.push_str(", 200 configurations over Q_5 and Q_7 at N = 20");
        o
    }));

    results.push(criterion(3, "Steinberg relation", None, || {
        let lines = verify::steinberg();
        let mut o = from_lines(&lines, 2);
        o.detail.push_str(", 24 pairs");
        o
    }));

    results.push(criterion(4, "Tate periods and reduction modulo q", Some(secs(60)), || {
        from_lines(&verify::tate_periods(), 12)
    }));

    results.push(criterion(5, "rank-2 period symmetry and val(Q)", None, || {
        from_lines(&verify::rank_two_periods(), 1)
    }));

    results.push(criterion(6, "theta residues equal the Hurewicz map", None, || {
        from_lines(&verify::hurewicz_residues(), 2)
    }));

    results.push(criterion(7, "K_2 regulator: harmonic, refinement, logarithms", None, || {
        from_lines(&verify::k2_tate(), 5)
    }));

    results.push(criterion(8, "Deligne cohomology and valuation consistency", None, || {
        from_lines(&verify::consani_and_valuation(), 9)
    }));

    results.push(criterion(9, "K_1 surface regulator well-defined", None, || {
        from_lines(&verify::k1_toy(), 3)
    }));

    results.push(criterion(10, "verify-all is deterministic", None, || {
        let a = verify_all_bytes(None);
        let b = verify_all_bytes(None);
        let one = verify_all_bytes(Some(1));
        let four = verify_all_bytes(Some(4));
        let ok = a == b && one == four && a == one;
        Outcome {
            ok,
            detail: format!(
                "{} bytes; repeat identical: {}, 1 vs 4 threads identical: {}",
                a.len(),
                a == b,
                one == four
            ),
        }
    }));

    let passed = results.iter().filter(|&&r| r).count();
    println!("{passed}/{} criteria passed", results.len());
    assert_eq!(passed, results.len());
}
