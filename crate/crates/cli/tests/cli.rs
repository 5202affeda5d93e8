use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use exg_core::builder::read_graph;
use exg_core::trace::{read_trace, write_trace};
use exg_core::{Address, Recorder};
use tempfile::TempDir;

fn exg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_exg")).args(args).output().unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = exg(args);
    assert!(
        out.status.success(),
        "exg {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    exg(args).status.code().unwrap()
}

fn p(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_string()
}

fn trace_and_build(dir: &TempDir, kernel: &[&str]) -> String {
    let t = p(dir, "t.exg");
    let g = p(dir, "g.json");
    let mut args = vec!["trace"];
    args.extend_from_slice(kernel);
    args.extend_from_slice(&["-o", &t]);
    ok(&args);
    ok(&["build", "-i", &t, "-o", &g]);
    g
}

fn graph_counts(path: &str) -> (usize, usize) {
    let g = read_graph(fs::File::open(path).unwrap()).unwrap();
    (g.vertex_count(), g.edge_count())
}

#[test]
fn trace_madd_has_twelve_records() {
    let dir = TempDir::new().unwrap();
    let t = p(&dir, "t.exg");
    ok(&["trace", "--kernel", "madd", "--n", "2", "--grain", "fine", "-o", &t]);
    let trace = read_trace(fs::read(&t).unwrap().as_slice()).unwrap();
    assert_eq!(trace.len(), 12);
}

#[test]
fn trace_rejects_bad_params() {
    let dir = TempDir::new().unwrap();
    let t = p(&dir, "t.exg");
    let out = exg(&["trace", "--kernel", "fft", "--len", "6", "--grain", "fine", "-o", &t]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    assert!(!Path::new(&t).exists());
    assert_eq!(code(&["trace", "--kernel", "qr", "--n", "2", "--grain", "fine", "-o", &t]), 2);
    assert_eq!(code(&["trace", "--kernel", "madd", "--n", "2", "--grain", "medium", "-o", &t]), 2);
    assert_eq!(code(&["trace", "--kernel", "madd", "--n", "2", "--grain", "fine"]), 2);
    assert_eq!(code(&["trace", "--kernel", "madd", "--n", "0", "--grain", "fine", "-o", &t]), 2);
}

#[test]
fn trace_sw_single_cell() {
    let dir = TempDir::new().unwrap();
    let t = p(&dir, "t.exg");
    ok(&["trace", "--kernel", "sw", "--len1", "1", "--len2", "1", "--grain", "fine", "-o", &t]);
    let trace = read_trace(fs::read(&t).unwrap().as_slice()).unwrap();
    assert_eq!(trace.tasks().len(), 1);
}

#[test]
fn build_madd_is_edgeless() {
    let dir = TempDir::new().unwrap();
    let g = trace_and_build(&dir, &["--kernel", "madd", "--n", "2", "--grain", "fine"]);
    assert_eq!(graph_counts(&g), (4, 0));
}

#[test]
fn build_more_kinds_more_edges() {
    let dir = TempDir::new().unwrap();
    let raw = trace_and_build(&dir, &["--kernel", "mmult", "--n", "2", "--grain", "fine"]);
    let all = p(&dir, "all.json");
    ok(&["build", "-i", &p(&dir, "t.exg"), "-o", &all, "--kinds", "raw,war,waw"]);
    assert!(graph_counts(&all).1 > graph_counts(&raw).1);
    let strict = p(&dir, "strict.json");
    ok(&["build", "-i", &p(&dir, "t.exg"), "-o", &strict, "--table", "strict", "--dep", "plain"]);
    assert_eq!(graph_counts(&strict), graph_counts(&raw));
}

#[test]
fn build_rejects_bad_input() {
    let dir = TempDir::new().unwrap();
    let t = p(&dir, "t.exg");
    fs::write(&t, "EXGTRACE 1\nT 1 1 1 0 0 R\nEND 1 0 1\n").unwrap();
    assert_eq!(code(&["build", "-i", &t, "-o", &p(&dir, "g.json")]), 2);
    assert_eq!(code(&["build", "-i", &p(&dir, "missing.exg"), "-o", &p(&dir, "g.json")]), 2);
    ok(&["trace", "--kernel", "madd", "--n", "2", "--grain", "fine", "-o", &t]);
    assert_eq!(code(&["build", "-i", &t, "-o", &p(&dir, "g.json"), "--kinds", "raw,xyz"]), 2);
    assert_eq!(code(&["build", "-i", &t, "-o", &p(&dir, "g.json"), "--table", "lossy"]), 2);
}

#[test]
fn build_splits_trace_regions() {
    let dir = TempDir::new().unwrap();
    let mut rec = Recorder::new();
    for trace_id in [4, 8] {
        rec.begin_trace(trace_id).unwrap();
        for _ in 0..2 {
            rec.begin_task(1).unwrap();
            rec.write(Address::new(0, 0), 1).unwrap();
            rec.end_task().unwrap();
        }
        rec.end_trace().unwrap();
    }
    let t = p(&dir, "multi.exg");
    let mut buf = Vec::new();
    write_trace(&rec.finalize().unwrap(), &mut buf).unwrap();
    fs::write(&t, buf).unwrap();
    ok(&["build", "-i", &t, "-o", &p(&dir, "g.json"), "--kinds", "waw"]);
    assert_eq!(graph_counts(&p(&dir, "g.4.json")), (2, 1));
    assert_eq!(graph_counts(&p(&dir, "g.8.json")), (2, 1));
    assert!(!dir.path().join("g.json").exists());
}

#[test]
fn analyze_summaries() {
    let dir = TempDir::new().unwrap();
    let g = trace_and_build(&dir, &["--kernel", "madd", "--n", "2", "--grain", "fine"]);
    let out = ok(&["analyze", "-i", &g, "-o", &p(&dir, "r.json")]);
    assert!(out.contains("completely_parallel=true"), "{out}");
    assert!(out.contains("ExecT=1"), "{out}");

    let g = trace_and_build(&dir, &["--kernel", "sw", "--len1", "4", "--len2", "4", "--grain", "fine"]);
    let out = ok(&["analyze", "-i", &g, "-o", &p(&dir, "r.json")]);
    assert!(out.contains("chain=false"), "{out}");
    assert!(out.contains("longest_path=7"), "{out}");
}

#[test]
fn analyze_serial_fixture() {
    let dir = TempDir::new().unwrap();
    let g = p(&dir, "chain.json");
    fs::write(
        &g,
        r#"{"version":1,"trace_id":9,
            "vertices":[{"exec_id":1,"region_id":1},{"exec_id":2,"region_id":1},{"exec_id":3,"region_id":1}],
            "edges":[{"from":1,"to":2,"kind":"RAW"},{"from":2,"to":3,"kind":"RAW"}]}"#,
    )
    .unwrap();
    let out = ok(&["analyze", "-i", &g, "-o", &p(&dir, "r.json")]);
    assert!(out.contains("completely_serial=true"), "{out}");
    assert!(out.contains("ExecT=3"), "{out}");
}

#[test]
fn analyze_rejects_malformed_graph() {
    let dir = TempDir::new().unwrap();
    let g = p(&dir, "bad.json");
    fs::write(&g, r#"{"version":1,"trace_id":0,"vertices":[],"edges":[{"from":1,"to":2,"kind":"RAW"}]}"#).unwrap();
    assert_eq!(code(&["analyze", "-i", &g, "-o", &p(&dir, "r.json")]), 2);
    fs::write(&g, "{").unwrap();
    assert_eq!(code(&["analyze", "-i", &g, "-o", &p(&dir, "r.json")]), 2);
}

#[test]
fn export_formats() {
    let dir = TempDir::new().unwrap();
    let g = p(&dir, "two.json");
    fs::write(
        &g,
        r#"{"version":1,"trace_id":0,
            "vertices":[{"exec_id":1,"region_id":5},{"exec_id":2,"region_id":5}],
            "edges":[{"from":1,"to":2,"kind":"RAW"}]}"#,
    )
    .unwrap();
    let dot = p(&dir, "two.dot");
    ok(&["export", "-i", &g, "--format", "dot", "-o", &dot]);
    assert!(fs::read_to_string(&dot).unwrap().contains(r#""1: 5" -> "2: 5""#));

    let structured = p(&dir, "two.out.json");
    ok(&["export", "-i", &g, "--format", "structured", "-o", &structured]);
    let again = p(&dir, "two.again.json");
    ok(&["export", "-i", &structured, "--format", "structured", "-o", &again]);
    assert_eq!(fs::read(&structured).unwrap(), fs::read(&again).unwrap());

    assert_eq!(code(&["export", "-i", &g, "--format", "svg", "-o", &dot]), 2);
    let junk = p(&dir, "junk.json");
    fs::write(&junk, r#"{"hello":1}"#).unwrap();
    assert_eq!(code(&["export", "-i", &junk, "--format", "dot", "-o", &dot]), 2);
}

#[test]
fn export_madd_quotient() {
    let dir = TempDir::new().unwrap();
    let g = trace_and_build(&dir, &["--kernel", "madd", "--n", "2", "--grain", "fine"]);
    let r = p(&dir, "r.json");
    ok(&["analyze", "-i", &g, "-o", &r]);
    let dot = p(&dir, "q.dot");
    ok(&["export", "-i", &r, "--format", "dot", "-o", &dot]);
    let text = fs::read_to_string(&dot).unwrap();
    assert!(text.contains(r#""1,2,3,4";"#), "{text}");
    assert_eq!(text.matches(';').count(), 1);
}

#[test]
fn demo_runs() {
    let dir = TempDir::new().unwrap();
    let out = ok(&["demo", "--kernel", "heat", "--nx", "4", "--nt", "4", "--grain", "fine", "-o", &p(&dir, "heat")]);
    assert!(out.contains("ExecT=4"), "{out}");
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("heat/report.json")).unwrap()).unwrap();
    assert_eq!(report["sym_explore"]["exec_time"], 4);

    let out = ok(&["demo", "--kernel", "madd", "--n", "2", "--grain", "coarse", "-o", &p(&dir, "madd")]);
    assert!(out.contains("completely_parallel=true"), "{out}");
    for name in exg_cli::DEMO_FILES {
        assert!(dir.path().join("madd").join(name).exists(), "{name}");
    }
}

#[test]
fn demo_missing_param() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&["demo", "--kernel", "heat", "--nx", "4", "--grain", "fine", "-o", &p(&dir, "d")]), 2);
    assert!(!dir.path().join("d").exists());
}

#[test]
fn usage_exit_codes() {
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["frobnicate"]), 2);
    assert_eq!(code(&[]), 2);
    assert_eq!(code(&["analyze", "-i", "a", "-o", "b", "--verbose"]), 2);
}
