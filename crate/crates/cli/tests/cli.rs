use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn hiersep(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hiersep"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, body: &str) {
    std::fs::write(dir.join(name), body).unwrap();
}

const ALL: &str = r#"{"alphabet":["a","b"],"states":1,"initial":[0],"final":[0],"transitions":[[0,"a",0],[0,"b",0]]}"#;
const NONE: &str = r#"{"alphabet":["a","b"],"states":1,"initial":[0],"final":[],"transitions":[]}"#;
const A_PREFIX: &str = r#"{"alphabet":["a","b"],"states":2,"initial":[0],"final":[1],"transitions":[[0,"a",1],[1,"a",1],[1,"b",1]]}"#;
const B_PREFIX: &str = r#"{"alphabet":["a","b"],"states":2,"initial":[0],"final":[1],"transitions":[[0,"b",1],[1,"a",1],[1,"b",1]]}"#;
const EVEN_A: &str = r#"{"alphabet":["a"],"states":2,"initial":[0],"final":[0],"transitions":[[0,"a",1],[1,"a",0]]}"#;

fn fixtures() -> tempfile::TempDir {
    let d = tempfile::tempdir().unwrap();
    for (n, b) in [
        ("all.json", ALL),
        ("none.json", NONE),
        ("a.json", A_PREFIX),
        ("b.json", B_PREFIX),
        ("even.json", EVEN_A),
    ] {
        write(d.path(), n, b);
    }
    d
}

#[test]
fn separate_exit_codes() {
    let d = fixtures();
    let p = d.path();
    assert_eq!(code(&hiersep(&["separate", "a.json", "b.json", "--level", "st-3/2"], p)), 0);
    assert_eq!(code(&hiersep(&["separate", "a.json", "a.json", "--level", "st-2"], p)), 3);
    assert_eq!(code(&hiersep(&["separate", "missing.json", "a.json"], p)), 1);
    assert_eq!(code(&hiersep(&["separate", "a.json"], p)), 1);
    assert_eq!(code(&hiersep(&["separate", "a.json", "b.json", "--level", "st-7"], p)), 1);
}

#[test]
fn prefix_languages_need_level_three_half() {
    let d = fixtures();
    let expected = [("st-1/2", 3), ("st-1", 3), ("st-3/2", 0), ("st-2", 0)];
    for (level, c) in expected {
        let o = hiersep(&["separate", "a.json", "b.json", "--level", level], d.path());
        assert_eq!(code(&o), c, "{level}");
    }
}

#[test]
fn resource_cap_exits_two() {
    let d = fixtures();
    let o = hiersep(&["separate", "a.json", "b.json", "--cap-monoid", "1"], d.path());
    assert_eq!(code(&o), 2, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn verdict_names_level_and_strategy() {
    let d = fixtures();
    let o = hiersep(&["separate", "a.json", "b.json", "--level", "st-1", "--strategy", "tag"], d.path());
    assert_eq!(code(&o), 3);
    assert!(stdout(&o).starts_with("inseparable at st-1 (strategy tag); monoid "));
}

#[test]
fn json_outputs_are_reproducible() {
    let d = fixtures();
    let p = d.path();
    for out in ["v1.json", "v2.json"] {
        let o = hiersep(&["separate", "a.json", "b.json", "--level", "st-2", "--format", "json", "--seed", "9", "--out", out], p);
        assert_eq!(code(&o), 0);
    }
    let v1 = std::fs::read(p.join("v1.json")).unwrap();
    assert_eq!(v1, std::fs::read(p.join("v2.json")).unwrap());
    let v: Value = serde_json::from_slice(&v1).unwrap();
    assert_eq!(v["manifest"]["seed"], 9);
    assert_eq!(v["manifest"]["inputs"].as_array().unwrap().len(), 2);
    assert_eq!(v["manifest"]["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
    assert_eq!(v["verdict"]["separable"], true);
    assert_eq!(v["verdict"]["level"], "st-2");
    assert_eq!(v["verdict"]["strategy"], "tm");
}

#[test]
fn text_output_files_carry_a_manifest() {
    let d = fixtures();
    let o = hiersep(&["separate", "a.json", "b.json", "--out", "v.txt"], d.path());
    assert_eq!(code(&o), 3);
    let text = std::fs::read_to_string(d.path().join("v.txt")).unwrap();
    assert!(text.contains("# seed: 0"));
    assert!(text.contains("# inputs:"));
    assert!(text.ends_with("inseparable at st-1/2 (strategy tm); monoid 3, 3 stored sets\n"));
}

fn monoid_stats(args: &[&str], dir: &Path) -> Value {
    let mut a = vec!["monoid", "--format", "json"];
    a.extend_from_slice(args);
    let o = hiersep(&a, dir);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str::<Value>(&stdout(&o)).unwrap()["stats"].clone()
}

#[test]
fn monoid_examples() {
    let d = fixtures();
    let p = d.path();
    let even = monoid_stats(&["even.json"], p);
    assert_eq!((even["size"].as_u64(), even["j_depth"].as_u64()), (Some(2), Some(1)));
    let even_re = monoid_stats(&["re:(a a)*", "--alphabet", "a", "--syntactic"], p);
    assert_eq!(even_re["size"], 2);
    assert_eq!(monoid_stats(&["all.json"], p)["size"], 1);
    assert_eq!(monoid_stats(&["--basis", "at"], p)["j_depth"], 3);
    assert_eq!(monoid_stats(&["--basis", "at", "--alphabet", "a,b,c"], p)["j_depth"], 4);
}

#[test]
fn monoid_output_feeds_back_as_input() {
    let d = fixtures();
    let p = d.path();
    assert_eq!(code(&hiersep(&["monoid", "a.json", "--format", "json", "--out", "ma.json"], p)), 0);
    assert_eq!(code(&hiersep(&["monoid", "b.json", "--format", "json", "--out", "mb.json"], p)), 0);
    assert_eq!(code(&hiersep(&["separate", "ma.json", "mb.json", "--level", "st-3/2"], p)), 0);
    assert_eq!(code(&hiersep(&["separate", "ma.json", "mb.json", "--level", "st-1"], p)), 3);
}

#[test]
fn user_basis_from_morphism_file() {
    let d = fixtures();
    let p = d.path();
    let parity = r#"{"alphabet":["a"],"size":2,"unit":0,"mul":[[0,1],[1,0]],"letters":{"a":1}}"#;
    write(p, "z2.json", parity);
    write(p, "odd.json", r#"{"alphabet":["a"],"states":2,"initial":[0],"final":[1],"transitions":[[0,"a",1],[1,"a",0]]}"#);
    let args = ["separate", "even.json", "odd.json", "--level", "pol", "--basis", "user:z2.json"];
    assert_eq!(code(&hiersep(&args, p)), 0);
    let args = ["separate", "even.json", "odd.json", "--level", "bpol", "--basis", "triv"];
    assert_eq!(code(&hiersep(&args, p)), 3);
    // st levels fix their basis
    let args = ["separate", "even.json", "odd.json", "--level", "st-1", "--basis", "at"];
    assert_eq!(code(&hiersep(&args, p)), 1);
}

#[test]
fn certify_trivial_certificate() {
    let d = fixtures();
    let p = d.path();
    write(p, "cert.json", r#"{"level":"st-3/2","expr":{"pol":[[[0,1,2,3]]]}}"#);
    assert_eq!(code(&hiersep(&["certify", "cert.json", "all.json", "none.json"], p)), 0);
    assert_eq!(code(&hiersep(&["certify", "cert.json", "all.json", "all.json"], p)), 3);
    // {ε}·a·A*: products of AT classes, the class of ε being 0
    write(p, "prefix.json", r#"{"level":"st-3/2","expr":{"pol":[[[0],"a",[0,1,2,3]]]}}"#);
    assert_eq!(code(&hiersep(&["certify", "prefix.json", "a.json", "b.json"], p)), 0);
}

#[test]
fn qbf_gen_and_check() {
    let d = fixtures();
    let p = d.path();
    write(p, "exists_x.qdimacs", "p cnf 1 1\ne 1 0\n1 0\n");
    write(p, "forall_x.qdimacs", "p cnf 1 1\na 1 0\n1 0\n");
    let o = hiersep(&["qbf", "check", "exists_x.qdimacs"], p);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("PASS: formula true"));
    let o = hiersep(&["qbf", "check", "forall_x.qdimacs"], p);
    assert!(stdout(&o).starts_with("PASS: formula false"));
    assert_eq!(code(&hiersep(&["qbf", "gen", "forall_x.qdimacs", "--out-dir", "inst"], p)), 0);
    let o = hiersep(&["separate", "inst/l.json", "inst/lprime.json", "--level", "st-3/2"], p);
    assert_eq!(code(&o), 0, "false formula gives a separable instance");
    let inst: Value = serde_json::from_str(&std::fs::read_to_string(p.join("inst/instance.json")).unwrap()).unwrap();
    assert_eq!(inst["truth"], false);
    assert_eq!(inst["instance"]["quantifiers"][0], "forall");
    write(p, "bad.qdimacs", "p cnf 1 1\ne 2 0\n1 0\n");
    assert_eq!(code(&hiersep(&["qbf", "check", "bad.qdimacs"], p)), 1);
}

#[test]
fn random_qbf_generation_is_seeded() {
    let d = fixtures();
    let run = |seed: &str| stdout(&hiersep(&["qbf", "gen", "--seed", seed, "--format", "json"], d.path()));
    assert_eq!(run("5"), run("5"));
    let v: Value = serde_json::from_str(&run("5")).unwrap();
    assert!(v["qdimacs"].as_str().unwrap().starts_with("p cnf 2 2"));
}

#[test]
fn reduce_reports_the_size_bound() {
    let d = fixtures();
    let o = hiersep(&["reduce", "a.json", "--format", "json"], d.path());
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["artifacts"]["size_bound_holds"], true);
    assert_eq!(v["artifacts"]["transition_order"].as_array().unwrap().len(), 3);
    assert!(v["morphism"]["mul"].is_array());
}

#[test]
fn bench_writes_csv() {
    let d = fixtures();
    let o = hiersep(&["bench", "--sizes", "1,2", "--pairs", "2", "--levels", "st-1/2,st-1"], d.path());
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let rows: Vec<&str> = out.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "states,pair,level,outcome,monoid_size,stored_sets,millis");
    assert_eq!(rows.len(), 1 + 2 * 2 * 2);
}

#[test]
fn selftest_runs_a_suite() {
    let d = fixtures();
    let o = hiersep(&["selftest", "--suite", "certificates"], d.path());
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("PASS"));
    assert_eq!(code(&hiersep(&["selftest", "--suite", "nonsense"], d.path())), 1);
}

#[test]
fn help_and_version_succeed() {
    let d = fixtures();
    assert_eq!(code(&hiersep(&["--help"], d.path())), 0);
    assert_eq!(code(&hiersep(&["--version"], d.path())), 0);
}
