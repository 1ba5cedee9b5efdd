use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn karate() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data/karate.gml")
}

fn decept(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_decept")).args(args).env_remove("DECEPT_DATA_DIR").output().unwrap()
}

fn text(bytes: &[u8]) -> String {
    String::from_utf8(bytes.to_vec()).unwrap()
}

#[test]
fn score_of_a_detected_community_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let graph = karate();
    let detected = decept(&["detect", "--graph", graph.to_str().unwrap(), "--algorithm", "louvain", "--seed", "1"]);
    assert!(detected.status.success());
    let partition = text(&detected.stdout);
    let target = partition.lines().find(|l| l.split_whitespace().count() >= 2).unwrap();
    let (p, h) = (dir.path().join("p.txt"), dir.path().join("h.txt"));
    std::fs::write(&p, &partition).unwrap();
    std::fs::write(&h, target).unwrap();

    let out = decept(&[
        "score",
        "--graph",
        graph.to_str().unwrap(),
        "--format",
        "gml",
        "--partition-file",
        p.to_str().unwrap(),
        "--target-file",
        h.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", text(&out.stderr));
    assert!(text(&out.stdout).lines().any(|l| l == "score 0"), "{}", text(&out.stdout));
}

#[test]
fn evaluate_writes_one_row_per_cell() {
    let graph = karate();
    let args = [
        "evaluate",
        "--graph",
        graph.to_str().unwrap(),
        "--detectors",
        "louvain",
        "--deceivers",
        "safgain",
        "--budgets",
        "1,2,3,4",
        "--runs",
        "10",
        "--seed",
        "7",
    ];
    let first = decept(&args);
    assert!(first.status.success(), "{}", text(&first.stderr));
    let csv = text(&first.stdout);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 41);
    assert_eq!(
        lines[0],
        "dataset,detector,deceiver,budget,run,seed,mod_before,mod_after,saf_before,saf_after,score_before,score_after,updates,duration_s,status"
    );
    assert!(lines[1].starts_with("karate,louvain,safgain,1,0,"));

    let again = decept(&args);
    assert_eq!(first.stdout, again.stdout);

    let mut ranged = args.to_vec();
    ranged[8] = "1..4";
    ranged.extend(["--jobs", "1"]);
    assert_eq!(decept(&ranged).stdout, first.stdout);
}

#[test]
fn evaluate_json_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let (out, summary) = (dir.path().join("r.json"), dir.path().join("s.json"));
    let status = decept(&[
        "evaluate",
        "--graph",
        karate().to_str().unwrap(),
        "--detectors",
        "greedy,labelprop",
        "--budgets",
        "2",
        "--runs",
        "3",
        "--emit",
        "json",
        "--output",
        out.to_str().unwrap(),
        "--summary",
        summary.to_str().unwrap(),
    ]);
    assert!(status.status.success(), "{}", text(&status.stderr));
    let reports = deception_core::io::read_reports_json(&std::fs::read(&out).unwrap()).unwrap();
    assert_eq!(reports.len(), 2 * 2 * 3);
    let groups: serde_json::Value = serde_json::from_slice(&std::fs::read(&summary).unwrap()).unwrap();
    assert_eq!(groups.as_array().unwrap().len(), 4);
}

#[test]
fn usage_errors_exit_with_two() {
    let graph = karate();
    let g = graph.to_str().unwrap();
    for args in [
        vec!["deceive", "--graph", g, "--deceiver", "safgain", "--budget", "0", "--worst-case"],
        vec!["deceive", "--graph", g, "--deceiver", "safgain", "--budget", "2"],
        vec!["evaluate", "--graph", g, "--budgets", "0..3"],
        vec!["evaluate", "--graph", g, "--detectors", "infomap"],
        vec!["detect", "--graph", g, "--algorithm", "walktrap"],
        vec!["frobnicate"],
    ] {
        assert_eq!(decept(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn runtime_errors_exit_with_one() {
    let out = decept(&["detect", "--graph", "/nonexistent/graph.gml"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(text(&out.stderr).starts_with("error: reading"));

    let dir = tempfile::tempdir().unwrap();
    let h = dir.path().join("h.txt");
    std::fs::write(&h, "1 999").unwrap();
    let out = decept(&[
        "deceive",
        "--graph",
        karate().to_str().unwrap(),
        "--deceiver",
        "modmin",
        "--budget",
        "1",
        "--target-file",
        h.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(text(&out.stderr).contains("999"));
}

#[test]
fn deceive_rewires_and_logs() {
    let dir = tempfile::tempdir().unwrap();
    let (h, edges, log) = (dir.path().join("h.txt"), dir.path().join("e.txt"), dir.path().join("log.txt"));
    std::fs::write(&h, "24 25 26 28 29 32\n").unwrap();
    let out = decept(&[
        "deceive",
        "--graph",
        karate().to_str().unwrap(),
        "--deceiver",
        "safgain",
        "--budget",
        "3",
        "--target-file",
        h.to_str().unwrap(),
        "--output",
        edges.to_str().unwrap(),
        "--log",
        log.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", text(&out.stderr));
    let log = std::fs::read_to_string(&log).unwrap();
    let updates: Vec<&str> = log.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(updates.len(), 3);
    let (g, _) = deception_core::io::load_edge_list(&std::fs::read(&edges).unwrap()).unwrap();
    let adds = updates.iter().filter(|l| l.starts_with("add")).count();
    assert_eq!(g.edge_count(), 78 + adds - (3 - adds));
}

#[test]
fn generate_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let truth = dir.path().join("t.txt");
    let args = [
        "generate",
        "--n",
        "30",
        "--k",
        "3",
        "--p-in",
        "1",
        "--p-out",
        "0",
        "--seed",
        "3",
        "--truth",
        truth.to_str().unwrap(),
    ];
    let a = decept(&args);
    assert!(a.status.success(), "{}", text(&a.stderr));
    assert_eq!(text(&a.stdout).lines().count(), 135);
    assert_eq!(std::fs::read_to_string(&truth).unwrap().lines().count(), 3);
    assert_eq!(decept(&args).stdout, a.stdout);

    let bad = decept(&["generate", "--n", "10", "--k", "2", "--p-in", "0.1", "--p-out", "0.5"]);
    assert_eq!(bad.status.code(), Some(1));
}
