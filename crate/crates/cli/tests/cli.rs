use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn golden() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../golden").canonicalize().unwrap()
}

fn run_in(golden_dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crlab"))
        .args(args)
        .env("CRLAB_GOLDEN_DIR", golden_dir)
        .output()
        .expect("binary runs")
}

fn run(args: &[&str]) -> Output {
    run_in(&golden(), args)
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn report(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

#[test]
fn classify_g2_matches_table() {
    let o = run(&["classify", "--family", "G", "--rank", "2", "--check"]);
    assert_eq!(code(&o), 0);
    let r = report(&o);
    assert_eq!(r["result"]["catalog"].as_array().unwrap().len(), 1);
    assert_eq!(r["result"]["catalog"][0]["sigma1"], serde_json::json!([1]));
    assert_eq!(r["config"]["rank_bound"], 8);
}

#[test]
fn classify_a2_is_empty() {
    let o = run(&["classify", "--family", "A", "--rank", "2"]);
    assert_eq!(code(&o), 0);
    assert!(report(&o)["result"]["catalog"].as_array().unwrap().is_empty());
}

#[test]
fn classify_rejects_large_rank_and_bad_format() {
    assert_eq!(code(&run(&["classify", "--family", "A", "--rank", "99"])), 2);
    assert_eq!(code(&run(&["classify", "--family", "Q", "--rank", "2"])), 2);
    assert_eq!(code(&run(&["classify", "--family", "A", "--rank", "3", "--format", "latex"])), 2);
    assert_eq!(code(&run(&["classify", "--family", "A"])), 2);
}

#[test]
fn classify_against_a_wrong_table_fails() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("t.json");
    std::fs::write(&table, r#"[{"algebra":{"family":"G","rank":2},"sigma1":[2],"sigma2":[1]}]"#).unwrap();
    let o = run(&["classify", "--family", "G", "--rank", "2", "--check", table.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
}

#[test]
fn classify_csv() {
    let o = run(&["classify", "--family", "C", "--rank", "2", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("family,rank,sigma1,sigma2,dims\n"), "{text}");
    assert!(text.contains("C,2,[1],[2],"), "{text}");
}

#[test]
fn prolong_sp4_and_sl4() {
    let o = run(&["prolong", "--family", "SP", "--params", "n=1,p=0"]);
    assert_eq!(code(&o), 0);
    let r = report(&o);
    assert_eq!(r["result"]["prolongation"]["total_dim"], 10);

    let o = run(&["prolong", "--family", "SL", "--params", "n=1"]);
    assert_eq!(code(&o), 0);
    let r = report(&o);
    assert_eq!(r["result"]["prolongation"]["total_dim"], 15);
    assert_eq!(r["result"]["prolongation"]["reduction_applied"], true);
}

#[test]
fn prolong_sp6_by_grading() {
    let o = run(&["prolong", "--form", "sp", "--grading", "1,1,0,-1,-1,0"]);
    assert_eq!(code(&o), 0);
    assert_eq!(report(&o)["result"]["prolongation"]["total_dim"], 21);
}

#[test]
fn prolong_cap_reports_failure() {
    // Without the reduction sp(4) does not terminate, so the complex base without g_{0,0} misses dim g.
    let o = run(&["prolong", "--family", "SP", "--params", "n=1,p=0", "--base", "complex"]);
    assert_eq!(code(&o), 1);
    let o = run(&["prolong", "--family", "SP", "--params", "n=1,p=0", "--base", "complex-g00"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn prolong_missing_param() {
    assert_eq!(code(&run(&["prolong", "--family", "SL"])), 2);
    assert_eq!(code(&run(&["prolong", "--family", "SL", "--params", "n"])), 2);
    assert_eq!(code(&run(&["prolong", "--family", "XX", "--params", "n=1"])), 2);
}

#[test]
fn cohomology_sp4() {
    let args = |d: &str, h: &str| {
        run(&["cohomology", "--family", "SP", "--params", "n=1,p=0", "--degree", d, "--homogeneity", h])
    };
    let o = args("2", "1");
    assert_eq!(code(&o), 0);
    assert_eq!(report(&o)["result"]["cohomology"]["dim"], 0);
    let o = args("1", "0");
    assert_eq!(code(&o), 0);
    assert!(report(&o)["result"]["cohomology"]["dim"].as_u64().unwrap() > 0);
    assert_eq!(code(&args("3", "0")), 2);
    assert_eq!(code(&args("1", "x")), 2);
}

#[test]
fn cohomology_bihomogeneity() {
    let dim = |fam: &str, params: &str, d: &str, h: &str| {
        let o = run(&["cohomology", "--family", fam, "--params", params, "--degree", d, "--homogeneity", h]);
        assert_eq!(code(&o), 0);
        let r = report(&o);
        assert_eq!(r["result"]["cohomology"]["homogeneity"], h.replace(' ', ""));
        r["result"]["cohomology"]["dim"].as_u64().unwrap()
    };
    for d in ["1", "2"] {
        assert_eq!(dim("SL", "n=1", d, "0,1"), 0);
        assert_eq!(dim("SO_hyp", "p=0,q=1", d, "0,1"), 0);
    }
    assert_eq!(dim("SP", "n=1,p=0", "1", "1,-1"), 1);
}

#[test]
fn model_verify_light_cone() {
    let o = run(&["model", "verify", "--family", "SO_hyp", "--params", "p=0,q=1", "--samples", "100", "--seed", "42"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(&o);
    assert_eq!(r["result"]["samples"], 100);
    assert!(r["result"]["failures"].as_array().unwrap().is_empty());
    assert_eq!(r["result"]["golden_digest"]["status"], "matched");
    assert_eq!(r["config"]["seed"], 42);
}

#[test]
fn tampered_digest_fails() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(golden().join("equation_digests.json")).unwrap();
    let mut table: serde_json::Map<String, Value> = serde_json::from_str(&text).unwrap();
    table.insert("SO_hyp p=0,q=1".into(), Value::String("0".repeat(64)));
    std::fs::write(dir.path().join("equation_digests.json"), serde_json::to_string(&table).unwrap()).unwrap();
    let o = run_in(dir.path(), &["model", "verify", "--family", "SO_hyp", "--params", "p=0,q=1", "--samples", "5"]);
    assert_eq!(code(&o), 1);
    assert_eq!(report(&o)["result"]["golden_digest"]["status"], "mismatched");
}

#[test]
fn model_emit_formats() {
    let o = run(&["model", "emit", "--family", "SU", "--params", "p=1,q=1,r=1,s=0", "--format", "latex"]);
    assert_eq!(code(&o), 0);
    let tex = String::from_utf8(o.stdout).unwrap();
    assert!(tex.starts_with("\\operatorname{Re}\\left(w\\right) = "), "{tex}");
    assert!(tex.contains("D_{rs} = "), "{tex}");

    let o = run(&["model", "emit", "--family", "SO_hyp", "--params", "p=0,q=1", "--format", "latex"]);
    let tex = String::from_utf8(o.stdout).unwrap();
    assert!(tex.contains("\\frac{z \\overline{z}"), "{tex}");

    let o = run(&["model", "emit", "--family", "SP", "--params", "n=2,p=1", "--format", "json-ast"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let eq = crlab::models::DefiningEquation::from_json(text.trim()).unwrap();
    let p = [("n".to_string(), 2), ("p".to_string(), 1)].into_iter().collect();
    assert_eq!(eq, crlab::models::family("SP").unwrap().equation(&p));

    assert_eq!(code(&run(&["model", "emit", "--family", "SP", "--params", "n=9,p=0"])), 2);
}

#[test]
fn reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for (path, threads) in [(&a, "1"), (&b, "3")] {
        let o = run(&[
            "model", "verify", "--family", "SU", "--params", "p=1,q=1,r=1,s=0", "--samples", "8", "--seed", "5",
            "--threads", threads, "--output", path.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0);
        assert!(o.stdout.is_empty());
    }
    let strip = |p: &Path| {
        let mut v: Value = serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap();
        v["config"]["threads"] = Value::Null;
        v["config"]["output"] = Value::Null;
        v
    };
    assert_eq!(strip(&a), strip(&b));
    let o1 = run(&["cohomology", "--family", "SL", "--params", "n=1", "--degree", "1", "--homogeneity", "0"]);
    let o2 = run(&["cohomology", "--family", "SL", "--params", "n=1", "--degree", "1", "--homogeneity", "0"]);
    assert_eq!(o1.stdout, o2.stdout);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&run(&["frobnicate"])), 2);
    assert_eq!(code(&run(&["model", "verify", "--family", "SL", "--params", "n=1", "--threads", "0"])), 2);
}
