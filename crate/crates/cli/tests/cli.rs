use std::path::Path;
use std::process::{Command, Output};

use qopt::graph::parse_graph;
use qopt::qubo::{default_penalty, parse_model, ModelFile};
use qopt::rational::int;
use qopt::solvers::SampleSet;

fn qopt(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qopt"))
        .args(args)
        .current_dir(dir)
        .env_remove("QOPT_SEED")
        .output()
        .unwrap()
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = qopt(dir, args);
    assert!(
        out.status.success(),
        "qopt {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap()
}

#[test]
fn gen_then_transform_uses_default_penalty() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["gen", "--k", "5", "--p", "0.5", "--seed", "1", "-o", "g.txt"]);
    ok(d, &["transform", "g.txt", "--direct", "--penalty", "auto", "-o", "q.txt"]);
    let g = parse_graph(read(d, "g.txt").as_bytes()).unwrap();
    let ModelFile::Qubo(q) = parse_model(&read(d, "q.txt")).unwrap() else {
        panic!("expected a QUBO file");
    };
    assert_eq!(q.num_qubits(), 5);
    let (u, v) = g.edges()[0];
    assert_eq!(q.get(u, v), int(default_penalty(&g) as i128));
}

#[test]
fn gen_writes_to_stdout_and_honours_env_seed() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let flag = ok(d, &["gen", "--k", "6", "--seed", "9"]);
    let env = Command::new(env!("CARGO_BIN_EXE_qopt"))
        .args(["gen", "--k", "6"])
        .env("QOPT_SEED", "9")
        .output()
        .unwrap();
    assert_eq!(flag, String::from_utf8(env.stdout).unwrap());
    let overridden = Command::new(env!("CARGO_BIN_EXE_qopt"))
        .args(["gen", "--k", "6", "--seed", "9"])
        .env("QOPT_SEED", "10")
        .output()
        .unwrap();
    assert_eq!(flag, String::from_utf8(overridden.stdout).unwrap());
}

#[test]
fn bruteforce_summary_reports_certified_value() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("g.txt"), "p mwis 3 3\nv 1 3\nv 2 5\nv 3 4\ne 1 2\ne 2 3\ne 1 3\n").unwrap();
    ok(d, &["transform", "g.txt", "--penalty", "11", "-o", "q.txt"]);
    let out = qopt(d, &["solve", "q.txt", "--solver", "bruteforce"]);
    assert!(out.status.success());
    let summary = String::from_utf8(out.stderr).unwrap();
    assert!(summary.contains("value=-5") && summary.contains("certified=true"), "{summary}");
    let set = SampleSet::from_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(set.best().unwrap().bits, vec![false, true, false]);
}

#[test]
fn samplers_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["gen", "--k", "6", "--seed", "2", "-o", "g.txt"]);
    ok(d, &["transform", "g.txt", "--format", "ising", "-o", "m.txt"]);
    for solver in ["sa", "anneal", "qaoa"] {
        let a = ok(d, &["solve", "m.txt", "--solver", solver, "--seed", "4", "--time", "5"]);
        let b = ok(d, &["solve", "m.txt", "--solver", solver, "--seed", "4", "--time", "5"]);
        assert_eq!(a, b, "{solver}");
        ok(d, &["solve", "m.txt", "--solver", solver, "--time", "5", "-o", "s.json"]);
        ok(d, &["verify", "s.json", "--graph", "g.txt", "--model", "m.txt"]);
    }
}

#[test]
fn solve_reads_config_file_and_writes_trace() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["gen", "--k", "4", "--seed", "3", "-o", "g.txt"]);
    ok(d, &["transform", "g.txt", "-o", "q.txt"]);
    std::fs::write(d.join("c.json"), r#"{"shots": 50, "time": 2.0, "dt": 0.05}"#).unwrap();
    ok(d, &["solve", "q.txt", "--solver", "anneal", "--config", "c.json", "--trace", "t.csv", "-o", "s.json"]);
    let set = SampleSet::from_json(&read(d, "s.json")).unwrap();
    assert_eq!(set.shots(), 50);
    let trace = read(d, "t.csv");
    assert_eq!(trace.lines().next(), Some("t,ground_state_population,norm"));
    assert_eq!(trace.lines().count(), 41);

    std::fs::write(d.join("bad.json"), r#"{"shots": 50, "colour": 1}"#).unwrap();
    let out = qopt(d, &["solve", "q.txt", "--solver", "sa", "--config", "bad.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_rejects_impossible_claims() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("g.txt"), "p mwis 2 0\nv 1 3\nv 2 4\n").unwrap();
    // Two isolated vertices: the optimum is 7.
    let good = r#"{"solver": "x", "seed": null, "shots": 1, "params": {}, "entries": [{"bits": "11", "energy": "-7", "count": 1}]}"#;
    std::fs::write(d.join("good.json"), good).unwrap();
    ok(d, &["verify", "good.json", "--graph", "g.txt"]);

    std::fs::write(d.join("p.txt"), "p mwis 2 1\nv 1 3\nv 2 4\ne 1 2\n").unwrap();
    let out = qopt(d, &["verify", "good.json", "--graph", "p.txt"]);
    assert!(out.status.success(), "an infeasible sample claims nothing");

    std::fs::write(d.join("q.txt"), "n 2\n0 0 -3\n1 1 -4\n").unwrap();
    let lying = good.replace("\"-7\"", "\"-8\"");
    std::fs::write(d.join("lying.json"), lying).unwrap();
    let out = qopt(d, &["verify", "lying.json", "--graph", "g.txt", "--model", "q.txt"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(qopt(d, &["frobnicate"]).status.code(), Some(1));
    assert_eq!(qopt(d, &["gen"]).status.code(), Some(1));
    assert_eq!(qopt(d, &["--help"]).status.code(), Some(0));
    assert_eq!(qopt(d, &["--version"]).status.code(), Some(0));
    let missing = qopt(d, &["transform", "missing.txt"]);
    assert_eq!(missing.status.code(), Some(2));
    let stderr = String::from_utf8(missing.stderr).unwrap();
    assert_eq!(stderr.lines().count(), 1, "{stderr}");

    std::fs::write(d.join("g.txt"), "p mwis 2 1\nv 1 1\nv 2 1\ne 1 3\n").unwrap();
    let bad = qopt(d, &["transform", "g.txt"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8(bad.stderr).unwrap().contains("line 4"));

    ok(d, &["gen", "--k", "20", "-o", "big.txt"]);
    ok(d, &["transform", "big.txt", "-o", "big_q.txt"]);
    let guard = qopt(d, &["solve", "big_q.txt", "--solver", "anneal"]);
    assert_eq!(guard.status.code(), Some(2));
    assert!(String::from_utf8(guard.stderr).unwrap().contains("limit"));
    assert_eq!(qopt(d, &["solve", "big_q.txt", "--solver", "simplex"]).status.code(), Some(2));
}

#[test]
fn bench_outputs_are_golden_without_timing() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("b.json"), r#"{"sizes": [4, 5], "instances_per_size": 2, "solvers": ["bnb", "sa", "anneal"], "anneal_time": 5}"#).unwrap();
    ok(d, &["bench", "--config", "b.json", "-o", "a", "--no-timing"]);
    ok(d, &["bench", "--config", "b.json", "-o", "b", "--no-timing"]);
    for name in ["records.csv", "records.json", "sa_success.tsv", "anneal_success.tsv", "bnb_time.tsv"] {
        assert_eq!(read(d, &format!("a/{name}")), read(d, &format!("b/{name}")), "{name}");
    }
    assert_eq!(read(d, "a/records.csv").lines().count(), 13);

    std::fs::write(d.join("bad.json"), r#"{"sizes": [4], "unknown_key": true}"#).unwrap();
    assert_eq!(qopt(d, &["bench", "--config", "bad.json", "-o", "c"]).status.code(), Some(2));
}
