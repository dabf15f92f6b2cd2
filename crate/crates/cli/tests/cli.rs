use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn tq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tq")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

#[test]
fn distance_is_a_versioned_record() {
    let o = tq(&["--json", "distance", &data("a3.tq"), "Pa", "Pc", "--radius", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["r_forward"]["value"], 0);
    assert_eq!(v["r_forward"]["certificate"], "exact");
    assert_eq!(v["from"], "a@0");
}

#[test]
fn every_subcommand_has_a_json_schema() {
    let cases: Vec<Vec<String>> = vec![
        vec!["parse".into(), data("ray.tq")],
        vec!["window".into(), data("a2.tq")],
        vec!["interval".into(), data("a3.tq"), "a".into(), "c".into()],
        vec!["section".into(), "verify".into(), data("a3.tq"), data("a3_projective.json")],
        vec!["section".into(), "tilt".into(), data("a3.tq"), "--seeds".into(), "b@1".into()],
        vec!["section".into(), "heart".into(), data("a3.tq"), data("a3_projective.json")],
        vec!["section".into(), "dualizing".into(), data("a3.tq"), data("a3_projective.json")],
        vec!["threads".into(), "report".into(), data("a3.tq")],
        vec!["rewrite".into(), "expand".into(), data("ray.tq")],
        vec!["export".into(), data("ray.tq")],
    ];
    for args in cases {
        let mut full = vec!["--json".to_string()];
        full.extend(args.iter().cloned());
        let refs: Vec<&str> = full.iter().map(String::as_str).collect();
        let o = tq(&refs);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(json(&o)["schema"], 1, "{args:?}");
    }
}

#[test]
fn projective_slice_verifies_and_corruption_fails() {
    assert_eq!(tq(&["section", "verify", &data("a3.tq"), &data("a3_projective.json")]).status.code(), Some(0));
    let bad = tq(&["--json", "section", "verify", &data("a3.tq"), &data("a3_bad.json")]);
    assert_eq!(bad.status.code(), Some(1));
    assert_eq!(json(&bad)["certificate"]["verdict"], "fail");
}

#[test]
fn condition_star_failure_exits_one() {
    let o = tq(&["--radius", "3", "section", "star", &data("notstar.tq"), &data("head_cut.json")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("countable_seed"));
    let o = tq(&["--radius", "3", "section", "star", &data("countable.tq"), &data("head_cut.json")]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn usage_and_parse_errors_exit_two() {
    assert_eq!(tq(&["distance", &data("a3.tq"), "a", "zz"]).status.code(), Some(2));
    assert_eq!(tq(&["parse", &data("missing.tq")]).status.code(), Some(2));
    assert_eq!(tq(&["frobnicate"]).status.code(), Some(2));
    let dir = std::env::temp_dir().join(format!("tq-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.tq");
    std::fs::write(&bad, "vertex a\narrow a b id=x\n").unwrap();
    let o = tq(&["--json-errors", "parse", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["schema"], 1);
    assert_eq!(err["error"]["kind"], "parse");
}

#[test]
fn strict_turns_window_inconclusiveness_into_exit_three() {
    let args = ["--radius", "1", "distance", &data("a3.tq"), "a", "c@1"];
    assert_eq!(tq(&args).status.code(), Some(0));
    let mut strict = vec!["--strict"];
    strict.extend(args);
    assert_eq!(tq(&strict).status.code(), Some(3));
}

#[test]
fn a2_window_dot_matches_golden_file() {
    let o = tq(&["--radius", "1", "export", "--window", &data("a2.tq")]);
    assert_eq!(o.status.code(), Some(0));
    let golden = std::fs::read_to_string(data("a2_r1.dot")).unwrap();
    assert_eq!(stdout(&o), golden);
    let nodes = golden.lines().filter(|l| l.trim_end().ends_with("\";") && !l.contains("->") && !l.contains("rank")).count();
    assert_eq!(nodes, 6);
}

#[test]
fn output_is_byte_identical_across_runs() {
    for args in [
        vec!["--json", "window", "--radius", "2"],
        vec!["export", "--window"],
        vec!["threads", "report", "--radius", "3"],
    ] {
        let mut a = args.clone();
        let f = data("ray.tq");
        a.push(&f);
        let first = tq(&a);
        let second = tq(&a);
        assert_eq!(first.stdout, second.stdout, "{args:?}");
    }
}

#[test]
fn section_overlay_fills_picks() {
    let o = tq(&["--radius", "1", "export", &data("a2.tq"), "--section", &data("a2_projective.json")]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let filled: Vec<&str> = text.lines().filter(|l| l.contains("filled")).collect();
    assert_eq!(filled.len(), 2);
    assert!(filled.iter().all(|l| l.contains("@0")));
}

#[test]
fn thread_report_finds_the_mark() {
    let o = tq(&["--json", "--radius", "3", "threads", "report", &data("ray.tq"), &data("ray_section.json")]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let ray = v["rays"].as_array().unwrap().iter().find(|r| r["anchor"] == "x@0").expect("ray with anchor x");
    assert_eq!(ray["mark"]["window"], "y@0");
    assert_eq!(ray["mark"]["symbolic"], "y");
    assert_eq!(ray["mark"]["routes_agree"], true);
}

#[test]
fn expansion_output_parses_back() {
    let o = tq(&["--depth", "2", "rewrite", "expand", &data("ray.tq")]);
    assert_eq!(o.status.code(), Some(0));
    let dir = std::env::temp_dir().join(format!("tq-exp-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("expanded.tq");
    std::fs::write(&path, &o.stdout).unwrap();
    let back = tq(&["--json", "parse", path.to_str().unwrap()]);
    assert_eq!(back.status.code(), Some(0));
    assert_eq!(json(&back)["threads"].as_array().unwrap().len(), 0);
    let contracted = tq(&["rewrite", "contract", path.to_str().unwrap()]);
    assert_eq!(contracted.status.code(), Some(0));
    assert!(stdout(&contracted).contains("thread x y"));
}

#[test]
fn zigzag_rewrite_replaces_the_tail() {
    let o = tq(&["rewrite", "zigzag", &data("a3.tq"), "--base", "a", "--tail", "b,c", "--fresh", "z"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("thread a z"), "{text}");
}
