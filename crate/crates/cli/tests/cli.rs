use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn orderlab(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orderlab"))
        .current_dir(dir)
        .env_remove("ORDERLAB_SEED")
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn fixtures() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, text: &str| fs::write(dir.path().join(name), text).unwrap();
    write("c3.json", r#"{"n": 3, "relation": {"mode": "covers", "pairs": [[0, 1], [1, 2]]}}"#);
    write("r1.json", r#"{"pairs": [[0, 0], [0, 1], [0, 2], [1, 2]]}"#);
    write("cycle.json", r#"{"n": 2, "relation": {"mode": "covers", "pairs": [[0, 1], [1, 0]]}}"#);
    write("bad-rel.json", r#"{"pairs": [[0, 1]]}"#);
    write("seed.json", r#"{"pairs": [[1, 1]]}"#);
    dir
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

#[test]
fn approx_lap_prints_sorted_indices() {
    let d = fixtures();
    let o = orderlab(d.path(), &["approx", "lap", "--poset", "c3.json", "--rel", "r1.json", "--set", "1,2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "2\n");
    let o = orderlab(d.path(), &["approx", "uap", "--poset", "c3.json", "--rel", "file:r1.json", "--set", "0", "--output", "json"]);
    assert_eq!(stdout(&o), "[0,1]\n");
}

#[test]
fn adjoint_rejects_non_lower_sets() {
    let d = fixtures();
    let o = orderlab(d.path(), &["approx", "adjoint", "--of", "uap", "--poset", "c3.json", "--rel", "builtin:bottom", "--set", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("not a lower set"));
    let o = orderlab(d.path(), &["approx", "adjoint", "--of", "lap", "--poset", "c3.json", "--rel", "builtin:leq", "--set", "1,2"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn poset_gen_chain_round_trips() {
    let d = fixtures();
    let o = orderlab(d.path(), &["poset", "gen", "--kind", "chain", "--n", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let generated = orderlab::io::poset_from_json(&stdout(&o)).unwrap();
    let fixture = orderlab::io::poset_from_json(&fs::read_to_string(path(&d, "c3.json")).unwrap()).unwrap();
    assert_eq!(generated, fixture);
}

#[test]
fn seed_comes_from_the_environment() {
    let d = fixtures();
    let gen = |seed: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_orderlab"));
        cmd.args(["poset", "gen", "--kind", "random", "--n", "8", "--p", "0.4"]);
        match seed {
            Some(s) => cmd.env("ORDERLAB_SEED", s),
            None => cmd.env_remove("ORDERLAB_SEED"),
        };
        stdout(&cmd.current_dir(d.path()).output().unwrap())
    };
    assert_eq!(gen(Some("5")), gen(Some("5")));
    let flag = stdout(&orderlab(d.path(), &["poset", "gen", "--kind", "random", "--n", "8", "--p", "0.4", "--seed", "5"]));
    assert_eq!(gen(Some("5")), flag);
    assert_ne!(gen(Some("5")), gen(Some("6")));
}

#[test]
fn usage_errors_exit_2_with_one_line() {
    let d = fixtures();
    let cases: [(&[&str], &str); 7] = [
        (&["approx", "lap", "--poset", "missing.json", "--rel", "r1.json", "--set", "1"], "missing.json"),
        (&["poset", "validate", "--poset", "cycle.json"], "cycle.json"),
        (&["aux", "validate", "--poset", "c3.json", "--rel", "bad-rel.json"], "bad-rel.json"),
        (&["approx", "lap", "--poset", "c3.json", "--rel", "r1.json", "--set", "1,7"], "--set"),
        (&["approx", "lap", "--poset", "c3.json", "--rel", "builtin:nope", "--set", "1"], "--rel"),
        (&["approx", "lap", "--poset", "c3.json", "--rel", "r1.json"], "--set"),
        (&["verify", "--suite", "nope"], "--suite"),
    ];
    for (args, needle) in cases {
        let o = orderlab(d.path(), args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        let err = stderr(&o);
        assert_eq!(err.lines().count(), 1, "{args:?}: {err}");
        assert!(err.contains(needle), "{args:?}: {err}");
        assert!(o.stdout.is_empty());
    }
}

#[test]
fn aux_commands() {
    let d = fixtures();
    let o = orderlab(d.path(), &["aux", "close", "--poset", "c3.json", "--from", "seed.json"]);
    assert_eq!(stdout(&o), "{\"pairs\":[[0,0],[0,1],[0,2],[1,1],[1,2]]}\n");
    let o = orderlab(d.path(), &["aux", "classify", "--poset", "c3.json", "--rel", "builtin:bottom"]);
    let class: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(class["approximating"], false);
    assert_eq!(class["approx_witness"], 1);
    let o = orderlab(d.path(), &["aux", "enumerate", "--poset", "c3.json", "--output", "text"]);
    let count: usize = stdout(&o).trim().parse().unwrap();
    assert!(count >= 3);
    let o = orderlab(d.path(), &["aux", "way-below", "--poset", "c3.json"]);
    assert_eq!(stdout(&o), "{\"pairs\":[[0,0],[0,1],[0,2],[1,1],[1,2],[2,2]]}\n");
}

#[test]
fn topology_commands() {
    let d = fixtures();
    let o = orderlab(d.path(), &["topology", "mu", "--poset", "c3.json", "--rel", "r1.json"]);
    assert_eq!(stdout(&o), "[[],[0,1,2]]\n");
    let o = orderlab(d.path(), &["topology", "scott", "--poset", "c3.json"]);
    assert_eq!(stdout(&o), "[[],[2],[1,2],[0,1,2]]\n");
    let o = orderlab(d.path(), &["topology", "scott", "--poset", "c3.json", "--dot"]);
    assert!(stdout(&o).starts_with("digraph scott {\n  rankdir=BT;"));
    let o = orderlab(d.path(), &["topology", "closure", "--poset", "c3.json", "--set", "1"]);
    assert_eq!(stdout(&o), "0,1\n");
    let o = orderlab(d.path(), &["topology", "interior", "--poset", "c3.json", "--rel", "builtin:bottom", "--set", "1,2"]);
    assert_eq!(stdout(&o), "\n");
    for mode in ["specialization", "underlying"] {
        let o = orderlab(d.path(), &["topology", "cspace", "--poset", "c3.json", "--rel", "builtin:bottom", "--upset", mode]);
        assert_eq!(stdout(&o), "{\"holds\":true,\"witness\":null}\n");
    }
}

#[test]
fn closure_commands() {
    let d = fixtures();
    let o = orderlab(d.path(), &["closure", "one-step", "--poset", "c3.json", "--set", "1"]);
    assert_eq!(stdout(&o), "0,1\n");
    let o = orderlab(d.path(), &["closure", "one-step", "--poset", "c3.json"]);
    assert_eq!(stdout(&o), "true\n");
    let o = orderlab(d.path(), &["closure", "meet-continuous", "--poset", "c3.json"]);
    assert_eq!(stdout(&o), "true\n");
}

#[test]
fn hasse_is_dot() {
    let d = fixtures();
    let o = orderlab(d.path(), &["poset", "hasse", "--poset", "c3.json", "--shade", "2"]);
    let dot = stdout(&o);
    assert!(dot.contains("rankdir=BT"));
    assert!(dot.contains("n0 -> n1;") && dot.contains("n1 -> n2;"));
    assert!(dot.contains("n2 [label=\"2\", style=filled"));
}

#[test]
fn family_commands() {
    let d = fixtures();
    let run = |args: &[&str]| stdout(&orderlab(d.path(), args)).trim().to_string();
    assert_eq!(run(&["family", "ladder", "order", "a(2,7)", "b(3)"]), "true");
    assert_eq!(run(&["family", "ladder", "member", "--set", "scott_closure_A", "top"]), "true");
    assert_eq!(run(&["family", "ladder", "member", "--set", "Aprime", "top"]), "false");
    assert_eq!(run(&["family", "omega", "wb", "nat(3)", "omega"]), "true");
    assert_eq!(run(&["family", "omega", "wb", "omega", "omega"]), "false");

    let o = orderlab(d.path(), &["family", "ladder", "wb", "top", "top"]);
    assert_eq!(o.status.code(), Some(2));
    let o = orderlab(d.path(), &["family", "omega", "order", "top", "omega"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("not an element of family omega"));
    let o = orderlab(d.path(), &["family", "ladder", "member", "--set", "B", "top"]);
    assert_eq!(o.status.code(), Some(2));

    let o = orderlab(d.path(), &["family", "ladder", "window", "--m", "1", "--n", "1"]);
    let w = orderlab::io::poset_from_json(&stdout(&o)).unwrap();
    assert_eq!(w.len(), 7);
    assert_eq!(w.label(6), "top");
    let o = orderlab(d.path(), &["family", "omega", "verify", "--m", "0", "--n", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let o = orderlab(d.path(), &["family", "ladder", "verify", "--m", "3", "--n", "3", "--sweep", "--output", "text"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn check_reports_findings_with_exit_3() {
    let d = fixtures();
    let o = orderlab(d.path(), &["check", "--suite", "cspace", "--poset", "c3.json", "--rel", "builtin:bottom"]);
    assert_eq!(o.status.code(), Some(3));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let findings = report["verdicts"].as_array().unwrap().iter().filter(|v| v.get("finding").is_some()).count();
    assert_eq!(findings, 2);

    let o = orderlab(d.path(), &["check", "--suite", "int-char,partition,basic", "--poset", "c3.json", "--rel", "r1.json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = orderlab(d.path(), &["check", "--suite", "sec5", "--poset", "c3.json"]);
    assert_eq!(o.status.code(), Some(0));
    let o = orderlab(d.path(), &["check", "--suite", "algebra", "--poset", "c3.json", "--rel", "r1.json", "--rel", "builtin:leq"]);
    assert_eq!(o.status.code(), Some(0));
    let o = orderlab(d.path(), &["check", "--suite", "algebra", "--poset", "c3.json", "--rel", "r1.json"]);
    assert_eq!(o.status.code(), Some(2));
    let o = orderlab(d.path(), &["check", "--suite", "all", "--poset", "c3.json", "--rel", "builtin:bottom"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn search_and_verify() {
    let d = fixtures();
    let o = orderlab(d.path(), &["search", "--property", "cspace-implies-approximating", "--max-n", "3"]);
    assert_eq!(o.status.code(), Some(3));
    let cx: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(cx["severity"], "finding");
    let o = orderlab(d.path(), &["search", "--property", "one-step-without-continuity", "--max-n", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "null\n");
    let o = orderlab(d.path(), &["search", "--property", "nope"]);
    assert_eq!(o.status.code(), Some(2));

    let o = orderlab(d.path(), &["verify", "--max-n", "2", "--suite", "all", "--out", "report.json"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(o.stdout.is_empty());
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(path(&d, "report.json")).unwrap()).unwrap();
    assert_eq!(report["schema"], 1);
    assert!(report["failures"].as_array().unwrap().is_empty());
    assert!(report.get("elapsed_ms").is_none());

    let o = orderlab(d.path(), &["verify", "--max-n", "2", "--suite", "partition", "--timing"]);
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(report["elapsed_ms"].is_u64());

    let o = orderlab(d.path(), &["verify", "--max-n", "3", "--suite", "all", "--instance-cap", "10"]);
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["incomplete"], true);
    assert_eq!(report["instances_attempted"], 10);
}

#[test]
fn output_format_is_checked() {
    let d = fixtures();
    let o = orderlab(d.path(), &["approx", "lap", "--poset", "c3.json", "--rel", "r1.json", "--set", "1", "--output", "dot"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--output dot"));
}
