use std::fs;
use std::process::{Command, Output};

fn qpcut(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qpcut"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn gen_writes_edge_list() {
    let dir = tempfile::tempdir().unwrap();
    let k2 = dir.path().join("k2.txt");
    let o = qpcut(&[
        "gen",
        "--n",
        "2",
        "--p",
        "1",
        "--seed",
        "1",
        "--out",
        k2.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert_eq!(fs::read_to_string(&k2).unwrap(), "0 1\n");

    let g = dir.path().join("g.txt");
    let o = qpcut(&[
        "gen",
        "--n",
        "50",
        "--p",
        "0.3",
        "--seed",
        "7",
        "--out",
        g.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let m = fs::read_to_string(&g).unwrap().lines().count();
    // Binomial(1225, 0.3): mean 367.5, sd ~16.
    assert!((300..=440).contains(&m), "m = {m}");
}

#[test]
fn gen_empty_graph_fails() {
    let o = qpcut(&["gen", "--n", "5", "--p", "0", "--seed", "1"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("no edges"));
}

#[test]
fn solve_exact_verify_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, text: &str| {
        let p = dir.path().join(name);
        fs::write(&p, text).unwrap();
        p.to_string_lossy().into_owned()
    };
    let k2 = write("k2.txt", "0 1\n");
    let k3 = write("k3.txt", "0 1\n1 2\n0 2\n");
    let c4 = write("c4.txt", "0 1\n1 2\n2 3\n3 0\n");

    let o = qpcut(&["solve", &k2]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("best cut 1"));

    let o = qpcut(&["solve", &k3, "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["best_cut"], 2);
    assert!((v["objective"].as_f64().unwrap() - 1.0).abs() < 1e-6);

    let o = qpcut(&[
        "solve",
        &c4,
        "--json",
        "--etas",
        "0.25,0.5",
        "--step-rule",
        "backtracking",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["best_cut"], 4);
    assert_eq!(v["objective"], 0.0);
    assert_eq!(v["threshold_cuts"].as_array().unwrap().len(), 2);

    let o = qpcut(&["exact", &k3]);
    assert_eq!(stdout(&o).trim(), "2");

    let o = qpcut(&["verify", &c4]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["eps"], 0.0);
}

#[test]
fn verify_exit_code_reflects_checks() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("pent.txt");
    fs::write(&p, "0 1\n1 2\n2 3\n3 4\n4 0\n").unwrap();
    let path = p.to_str().unwrap();
    assert!(qpcut(&["verify", path]).status.success());
    // A threshold outside (0, 1/2) is an error, not a failed check.
    assert_eq!(
        qpcut(&["verify", path, "--eta", "0.7"]).status.code(),
        Some(1)
    );
}

#[test]
fn bad_inputs_exit_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.txt");
    fs::write(&p, "0 1\n2 2\n").unwrap();
    let o = qpcut(&["solve", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    assert!(!qpcut(&["solve", "/nonexistent/graph.txt"]).status.success());
    assert!(!qpcut(&[
        "solve",
        p.to_str().unwrap(),
        "--alpha",
        "0.4",
        "--beta",
        "1"
    ])
    .status
    .success());
    assert!(!qpcut(&["frobnicate"]).status.success());
}

#[test]
fn dimacs_input() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("k3.col");
    fs::write(&p, "c triangle\np edge 3 3\ne 1 2\ne 2 3\ne 1 3\n").unwrap();
    let o = qpcut(&["exact", p.to_str().unwrap(), "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["maxcut"], 2);
}

#[test]
fn bench_json_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.json");
    fs::write(
        &spec,
        r#"{"cells":[{"n":10,"p":1.0,"trials":3}],"compare_exact":true}"#,
    )
    .unwrap();
    let o = qpcut(&["bench", spec.to_str().unwrap(), "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["per_cell"][0]["mean_ratio_vs_exact"], 1.0);
    assert_eq!(v["per_cell"][0]["mean_cut"], 25.0);

    let out = dir.path().join("t.csv");
    let o = qpcut(&[
        "--threads",
        "2",
        "bench",
        spec.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let csv = fs::read_to_string(out).unwrap();
    assert!(csv.starts_with(
        "n,p,trials,mean_cut,std_cut,mean_edges,mean_baseline_cut,mean_ratio_vs_exact,"
    ));
    assert_eq!(csv.lines().count(), 2);
}
