use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "fixtures", name].iter().collect();
    p.display().to_string()
}

fn bohrspec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bohrspec")).args(args).output().expect("binary runs")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json output")
}

fn stderr_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stderr).expect("json error")
}

#[test]
fn two_context_points() {
    let o = bohrspec(&["bohr", "--n", "2", "points"]);
    assert!(o.status.success());
    let v = stdout_json(&o);
    assert_eq!(v["count"], 3);
    assert_eq!(v["points"].as_array().unwrap().len(), 3);
}

#[test]
fn absorption_query_prints_true() {
    let o = bohrspec(&["lattice", "--present", &fixture("free2.json"), "--query", "(g1 & g2) v g1 <= g1"]);
    assert!(o.status.success());
    assert_eq!(String::from_utf8(o.stdout).unwrap().trim(), "true");
}

#[test]
fn non_leq_query_prints_false() {
    let o = bohrspec(&["lattice", "--present", &fixture("free2.json"), "--query", "g1 <= g1 & g2"]);
    assert_eq!(String::from_utf8(o.stdout).unwrap().trim(), "false");
}

#[test]
fn schema_errors_name_the_path() {
    let o = bohrspec(&["diagram", "--input", &fixture("free2.json")]);
    assert_eq!(o.status.code(), Some(1));
    let e = stderr_json(&o);
    assert_eq!(e["error"]["kind"], "Schema");
    assert_eq!(e["error"]["path"], "generators");
}

#[test]
fn oversized_bases_are_rejected() {
    let o = bohrspec(&["bohr", "--n", "9"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stderr_json(&o)["error"]["kind"], "TooLarge");
}

#[test]
fn missing_files_are_validation_errors() {
    let o = bohrspec(&["aqft", "--input", "no-such-file.json"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stderr_json(&o)["error"]["kind"], "Io");
}

#[test]
fn usage_errors_exit_nonzero() {
    assert_eq!(bohrspec(&["bohr"]).status.code(), Some(1));
    assert_eq!(bohrspec(&["frobnicate"]).status.code(), Some(1));
    assert!(bohrspec(&["--help"]).status.success());
}

#[test]
fn dot_is_refused_where_unavailable() {
    let o = bohrspec(&["bohr", "--n", "2", "opens", "--format", "dot"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stderr_json(&o)["error"]["kind"], "Unsupported");
}

#[test]
fn export_draws_specialization() {
    let o = bohrspec(&["export", "--n", "2"]);
    let dot = String::from_utf8(o.stdout).unwrap();
    assert!(dot.starts_with("digraph points {"));
    assert_eq!(dot.matches(" -> ").count(), 2);
    let o = bohrspec(&["export", "--input", &fixture("m2.json"), "--graph", "contexts"]);
    assert_eq!(String::from_utf8(o.stdout).unwrap().matches(" -> ").count(), 2);
}

#[test]
fn net_views() {
    let net = fixture("net_chain_bohr.json");
    let check = bohrspec(&["aqft", "--input", &net, "check"]);
    assert!(check.status.success());
    assert_eq!(stdout_json(&check)["triples"], 9);
    let points = stdout_json(&bohrspec(&["aqft", "--input", &net]));
    let generic = stdout_json(&bohrspec(&["aqft", "--input", &net, "generic"]));
    assert_eq!(points["count"], generic["count"]);
}

#[test]
fn diagram_views_agree_with_counts() {
    let doc = fixture("two_context.json");
    let count = |view: &str| stdout_json(&bohrspec(&["diagram", "--input", &doc, view]))["count"].clone();
    assert_eq!(count("points"), 3);
    assert_eq!(count("opens"), 5);
    assert_eq!(count("sier"), 6);
}

#[test]
fn max_size_guards_enumeration() {
    let o = bohrspec(&["--max-size", "2", "bohr", "--n", "2", "opens"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stderr_json(&o)["error"]["kind"], "TooLarge");
}

#[test]
fn verify_lattice_suite_passes() {
    let o = bohrspec(&["verify", "--suite", "lattice", "--format", "json"]);
    assert!(o.status.success());
    let v = stdout_json(&o);
    assert_eq!(v["passed"], v["total"]);
    assert_eq!(bohrspec(&["verify", "--suite", "nope"]).status.code(), Some(1));
}

#[test]
fn bad_thread_counts_are_rejected() {
    let o = Command::new(env!("CARGO_BIN_EXE_bohrspec"))
        .args(["bohr", "--n", "1"])
        .env("BOHRSPEC_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stderr_json(&o)["error"]["path"], "BOHRSPEC_THREADS");
}
