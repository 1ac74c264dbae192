use std::process::{Command, Output};

use hatcert::lemmas::{LemmaReport, Status};
use hatcert_cli::commands::{exit_code, EXIT_FAIL, EXIT_PASS};
use hatcert_cli::report::Aggregate;
use num_bigint::BigUint;
use proptest::prelude::*;
use serde_json::Value;

fn hatcert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hatcert"))
        .args(args)
        .env_remove("HATCERT_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn half_factorial(n: u32) -> BigUint {
    (1..=n).fold(BigUint::from(1u32), |acc, k| acc * k) / 2u32
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn verify_all_json() {
    let out = hatcert(&["verify", "--m", "1", "--lemmas", "all", "--format", "json"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = json(&out);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 18);
    assert!(rows.iter().all(|r| r["status"] == "pass"));
    assert_eq!(v["aggregate"]["status"], "pass");
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    let generation = rows.iter().find(|r| r["lemma_id"] == "generation").unwrap();
    assert_eq!(generation["method"], "bsgs-exact");
    // 127!/2 is far above 2^53.
    assert_eq!(
        generation["data"]["order"],
        Value::String(half_factorial(127).to_string())
    );
}

#[test]
fn intersections_cover_every_class() {
    let out = hatcert(&[
        "verify",
        "--m",
        "1,2,3,4",
        "--lemmas",
        "fix-intersections",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    let items: Vec<&str> = rows
        .iter()
        .map(|r| r["data"]["pair_item"].as_str().unwrap())
        .collect();
    assert_eq!(items, ["e", "f", "g", "d"]);
    assert!(rows.iter().all(|r| r["status"] == "pass"));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["verify", "--m", "0"][..],
        &["verify", "--m", "1", "--lemmas", "no-such-lemma"],
        &["explore", "--m", "1", "--depth", "-1"],
        &[
            "verify",
            "--m",
            "1",
            "--lemmas",
            "orders",
            "--out",
            "/nonexistent/dir/report.json",
        ],
        &["explore", "--m", "1,2", "--dot", "/tmp/unused.dot"],
        &["order", "--m", "5"],
    ] {
        assert_eq!(hatcert(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn mutation_exits_1_with_witnesses() {
    let out = hatcert(&[
        "verify",
        "--m",
        "1",
        "--lemmas",
        "orders,yz-tables",
        "--format",
        "json",
        "--mutate",
        "x:3:90",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    for row in v["rows"].as_array().unwrap() {
        if row["status"] == "fail" {
            assert!(row["witness"].is_string());
        }
    }
    assert_eq!(v["aggregate"]["status"], "fail");
}

#[test]
fn reports_are_deterministic() {
    let run = || {
        let mut v = json(&hatcert(&[
            "verify",
            "--m",
            "1,2",
            "--lemmas",
            "alt-membership,prop3-cases,double-coset",
            "--format",
            "json",
        ]));
        v.as_object_mut().unwrap().remove("wall_time_ms");
        serde_json::to_string(&v).unwrap()
    };
    assert_eq!(run(), run());
}

#[test]
fn report_file_and_text() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.txt");
    let out = hatcert(&[
        "verify",
        "--m",
        "2",
        "--lemmas",
        "orders,fix-xyxz",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("M    LEMMA"));
    assert!(lines[1].starts_with("2    orders                 pass"));
    assert!(lines[2].starts_with("2    fix-xyxz               pass"));
    assert_eq!(lines[3], "aggregate: pass (2 passed, 0 failed, 0 skipped)");
}

#[test]
fn skipped_rows_are_reported() {
    let out = hatcert(&[
        "verify",
        "--m",
        "5",
        "--lemmas",
        "generation",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["rows"][0]["status"], "skipped");
    assert_eq!(v["aggregate"]["skipped"], 1);
}

#[test]
fn explore_writes_regular_dot() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ball.dot");
    let out = hatcert(&[
        "explore",
        "--m",
        "1",
        "--depth",
        "2",
        "--dot",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let dot = std::fs::read_to_string(&path).unwrap();
    assert!(dot.starts_with("digraph ball {"));
    // Vertices at depth 0 and 1 are internal; each has four out-arcs to
    // four distinct neighbours.
    let mut internal = Vec::new();
    for line in dot.lines() {
        if let Some(rest) = line.trim().strip_prefix('v') {
            if let Some((id, label)) = rest.split_once(" [label=\"") {
                if label.starts_with("0:") || label.starts_with("1:") {
                    internal.push(format!("v{id}"));
                }
            }
        }
    }
    assert_eq!(internal.len(), 5);
    for v in &internal {
        let mut targets: Vec<&str> = dot
            .lines()
            .filter_map(|l| l.trim().strip_prefix(&format!("{v} -> ")))
            .map(|l| l.split(' ').next().unwrap())
            .collect();
        assert_eq!(targets.len(), 4);
        targets.sort();
        targets.dedup();
        assert_eq!(targets.len(), 4);
    }
    assert_eq!(
        dot.matches("class=\"d1\"").count(),
        dot.matches("class=\"d2\"").count()
    );
}

#[test]
fn explore_cycles() {
    let out = hatcert(&["explore", "--m", "2", "--cycles"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("|C1|=12 |C2|=12 C1∩C2={1}"), "{text}");
    assert!(text.contains("radius 6, attachment 1"));
    assert!(text.contains("C1 steps: d1 d2"));
}

#[test]
fn order_bsgs() {
    let out = hatcert(&["order", "--m", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains(&format!("= {}\n", half_factorial(127))));
    assert!(text.contains("method: bsgs-exact"));

    let out = hatcert(&["order", "--m", "2", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(
        v["results"][0]["order"],
        Value::String(half_factorial(255).to_string())
    );
}

#[test]
fn order_giant_test() {
    let out = hatcert(&["order", "--m", "3", "--giant-test"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("alternating, certified (jordan)"), "{text}");
    assert!(text.contains(&format!("= {}\n", half_factorial(511))));
}

#[test]
fn thread_flag_overrides_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_hatcert"))
        .args([
            "verify",
            "--m",
            "1",
            "--lemmas",
            "orders",
            "--format",
            "json",
            "--threads",
            "2",
        ])
        .env("HATCERT_THREADS", "3")
        .output()
        .unwrap();
    assert_eq!(json(&out)["config"]["threads"], 2);
    let out = Command::new(env!("CARGO_BIN_EXE_hatcert"))
        .args([
            "verify", "--m", "1", "--lemmas", "orders", "--format", "json",
        ])
        .env("HATCERT_THREADS", "3")
        .output()
        .unwrap();
    assert_eq!(json(&out)["config"]["threads"], 3);
}

fn row(status: Status) -> LemmaReport {
    LemmaReport {
        lemma_id: "orders",
        m: 1,
        status,
        data: Default::default(),
        witness: None,
        method: None,
        elapsed: Default::default(),
    }
}

proptest! {
    #[test]
    fn exit_code_contract(statuses in prop::collection::vec(0u8..3, 0..30)) {
        let rows: Vec<LemmaReport> = statuses
            .iter()
            .map(|&s| row([Status::Pass, Status::Fail, Status::Skipped][s as usize]))
            .collect();
        let expected = if statuses.contains(&1) { EXIT_FAIL } else { EXIT_PASS };
        prop_assert_eq!(exit_code(&Aggregate::of(&rows)), expected);
    }
}
