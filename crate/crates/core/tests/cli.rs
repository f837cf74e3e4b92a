use std::path::PathBuf;
use std::process::{Command, Output};

use dqred::report::{parse_text_summary, Report};

fn scene(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenes").join(name)
}

fn dqred(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dqred")).args(args).output().expect("run dqred")
}

fn verify(scene_name: &str, extra: &[&str]) -> Output {
    let s = scene(scene_name);
    let mut args = vec!["verify", "--scene", s.to_str().unwrap()];
    args.extend_from_slice(extra);
    dqred(&args)
}

#[test]
fn passing_suite_exits_zero_with_json() {
    let out = verify("abelian1.json", &["--suite", "koszul"]);
    assert_eq!(out.status.code(), Some(0));
    let r: Report = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r.scene, "abelian1");
    assert_eq!(r.summary.fail, 0);
    assert!(r.summary.pass >= 5);
    assert!(r.records.iter().all(|x| x.runtime_ms.is_none()));
}

#[test]
fn failing_identity_exits_one_and_reports_order() {
    let out = verify("abelian1.json", &["--suite", "involution", "--order", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let r: Report = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r.order, 2);
    let rec = r.get("involution.gaussian.modular.first_order").unwrap();
    assert_eq!(rec.failing_order, Some(1));
    assert!(rec.failing_coefficient.is_some());
}

#[test]
fn configuration_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"lie_algebra": {"label": "x", "dim": 3, "structure_constants": [[1,2,1,1],[2,1,1,1]]},
            "base": {"dim": 2, "poisson_matrix": [[0,1],[-1,0]]}, "truncation_order": 2, "seed": 1}"#,
    )
    .unwrap();
    let out = dqred(&["verify", "--scene", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("(1,2,1)"));
    assert_eq!(verify("abelian1.json", &["--suite", "nope"]).status.code(), Some(2));
    assert_eq!(verify("abelian1.json", &["--format", "xml"]).status.code(), Some(2));
    assert_eq!(dqred(&["verify"]).status.code(), Some(2));
    assert_eq!(dqred(&["verify", "--scene", "/nonexistent.json"]).status.code(), Some(2));
}

#[test]
fn json_reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for p in [&a, &b] {
        let out = verify("heis3.json", &["--suite", "star", "--order", "2", "--out", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stdout.is_empty());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let other = verify("heis3.json", &["--suite", "star", "--order", "2", "--seed", "7"]);
    assert_ne!(other.stdout, std::fs::read(&a).unwrap());
}

#[test]
fn text_format_and_timings() {
    let text = verify("abelian2.json", &["--suite", "koszul", "--format", "text", "--timings"]);
    assert_eq!(text.status.code(), Some(0));
    let t = String::from_utf8(text.stdout).unwrap();
    assert!(t.starts_with("scene abelian2 seed"));
    assert!(t.lines().any(|l| l.starts_with("PASS koszul.d_squared") && l.ends_with(" ms")));
    let json = verify("abelian2.json", &["--suite", "koszul"]);
    let r: Report = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(parse_text_summary(&t).unwrap(), r.summary);
}

#[test]
fn computation_verbs() {
    let s = scene("abelian1.json");
    let s = s.to_str().unwrap();
    let out = dqred(&["star", "--scene", s, "--kind", "moyal", "--f", "q", "--g", "p"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "q*p + λ*(1/2*i)");
    let out = dqred(&["star", "--scene", s, "--kind", "std", "--f", "P1", "--g", "g1"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "P1*g1 + λ*(-i)");
    let out = dqred(&["involve", "--scene", s, "--u", "i*q + p^2"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "p^2 - i*q");
    let out = dqred(&["reduce", "--scene", s, "--order", "2", "--u", "q", "--v", "p"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("C_0 = q*p\nC_1 = 1/2*i\nC_2 = 0\n"), "{text}");
    let out = dqred(&["reduce", "--scene", s, "--u", "P1", "--v", "p"]);
    assert_eq!(out.status.code(), Some(2));
    let out = dqred(&["involve", "--scene", s, "--u", "q", "--weight", "missing"]);
    assert_eq!(out.status.code(), Some(2));
}
