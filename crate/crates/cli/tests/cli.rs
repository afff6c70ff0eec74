use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn rp3link(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rp3link"))
        .args(args)
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn signing_file(body: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(body.as_bytes()).unwrap();
    f
}

#[test]
fn replay_thm8_certifies_all_cases() {
    let out = rp3link(&["replay", "--script", "thm8"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["summary"], "cases: 64/64 certified");
    let md = rp3link(&["replay", "--script", "thm8", "--format", "md"]);
    assert!(String::from_utf8_lossy(&md.stdout).contains("cases: 64/64 certified"));
}

#[test]
fn replay_json_is_byte_identical_across_runs_and_workers() {
    let a = rp3link(&["replay", "--script", "thm8", "--workers", "1"]);
    let b = rp3link(&["replay", "--script", "thm8", "--workers", "3"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn replay_table_and_case_views() {
    let t = rp3link(&["replay", "--script", "thm8", "--table", "2"]);
    assert_eq!(t.status.code(), Some(0));
    let t4 = rp3link(&["replay", "--script", "thm8", "--table", "4"]);
    assert_eq!(t4.status.code(), Some(1));
    let c = rp3link(&["replay", "--script", "thm8", "--case", "1+,2-,3+,4+,5+,6-"]);
    assert_eq!(c.status.code(), Some(0));
    assert_eq!(json(&c)["case"]["case"], "1+,2-,3+,4+,5+,6-");
    let missing = rp3link(&["replay", "--script", "thm8", "--case", "1+,2+"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn replay_failing_script_exits_1() {
    let out = rp3link(&["replay", "--script", "prop10"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["passed"], false);
}

#[test]
fn replay_bad_file_names_path_and_location() {
    let f = signing_file("{\"id\": \"x\",\n  \"steps\": [");
    let out = rp3link(&["replay", "--file", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains(f.path().to_str().unwrap()) && err.contains("line 2"),
        "{err}"
    );
}

#[test]
fn certify_all_plus_k10_has_no_certificate() {
    let f = signing_file(r#"{"graph": "k10", "negative_edges": []}"#);
    let out = rp3link(&[
        "certify",
        "--graph",
        "k10",
        "--signing",
        f.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(
        json(&out)["summary"],
        "no certificate; no 1-homologous cycles"
    );
}

#[test]
fn certify_finds_disjoint_triple() {
    let f = signing_file(r#"{"graph": "k10", "negative_edges": [["1","2"],["3","4"],["5","6"]]}"#);
    let out = rp3link(&[
        "certify",
        "--graph",
        "k10",
        "--signing",
        f.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["verdict"]["verdict"], "certificate");
}

#[test]
fn certify_rejects_mismatched_graph() {
    let f = signing_file(r#"{"graph": "k9", "negative_edges": []}"#);
    let out = rp3link(&[
        "certify",
        "--graph",
        "k10",
        "--signing",
        f.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_and_search_commands() {
    let p = rp3link(&["verify", "parity", "--samples", "500", "--seed", "3"]);
    assert_eq!(p.status.code(), Some(0));
    assert_eq!(json(&p)["sample_failures"], 0);
    let s = rp3link(&["verify", "switching", "--samples", "200"]);
    assert_eq!(s.status.code(), Some(0));
    let k6 = rp3link(&["search", "linkless-k6"]);
    assert_eq!(k6.status.code(), Some(0));
    assert_eq!(json(&k6)["orbit_count"], 1);
    let free = rp3link(&["search", "certificate-free", "--graph", "k7-e-k7"]);
    assert_eq!(free.status.code(), Some(0));
    assert_eq!(json(&free)["found"], true);
}

#[test]
fn orbits_counts() {
    let out = rp3link(&["orbits", "--graph", "k6-c6-k6"]);
    assert_eq!(json(&out)["orbit_count"], 5);
    let bad = rp3link(&["orbits", "--graph", "nonsense"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn sweep_paper_and_full_guard() {
    let out = rp3link(&["sweep", "k10"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(
        (v["total"].as_u64(), v["silent_count"].as_u64()),
        (Some(64), Some(0))
    );
    assert!(v.get("elapsed_ms").is_none());
    let full = rp3link(&["sweep", "k10", "--mode", "full"]);
    assert_eq!(full.status.code(), Some(2));
    let limited = rp3link(&["sweep", "k10", "--mode", "full", "--ack", "--limit", "300"]);
    assert_eq!(json(&limited)["total"], 300);
}
