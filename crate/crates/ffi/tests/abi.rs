use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use dqred_ffi::*;

fn scene_path(name: &str) -> CString {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/scenes").join(name);
    CString::new(p.to_str().unwrap()).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(dq_last_error()) }.to_str().unwrap().to_string()
}

#[test]
fn koszul_suite_through_the_abi() {
    unsafe {
        let mut scene = ptr::null_mut();
        assert_eq!(dq_scene_load(scene_path("abelian1.json").as_ptr(), &mut scene), DqStatus::Ok);
        assert_eq!(dq_scene_order(scene), 4);
        let mut report = ptr::null_mut();
        let suite = CString::new("koszul").unwrap();
        assert_eq!(dq_run_suite(scene, suite.as_ptr(), &mut report), DqStatus::Ok);
        let (mut p, mut f, mut s) = (0usize, 0usize, 0usize);
        assert_eq!(dq_report_counts(report, &mut p, &mut f, &mut s), DqStatus::Ok);
        assert!(p > 0);
        assert_eq!((f, s), (0, 0));
        let mut json = ptr::null_mut();
        let fmt = CString::new("json").unwrap();
        assert_eq!(dq_report_render(report, fmt.as_ptr(), &mut json), DqStatus::Ok);
        let text = CStr::from_ptr(json).to_str().unwrap().to_string();
        dq_string_free(json);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["summary"]["pass"].as_u64().unwrap() as usize, p);
        dq_report_free(report);
        dq_scene_free(scene);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut scene = ptr::null_mut();
        let bad = CString::new(
            r#"{"lie_algebra": {"label": "x", "dim": 3, "structure_constants": [[1,2,1,1],[2,1,1,1]]},
                "base": {"dim": 2, "poisson_matrix": [[0,1],[-1,0]]}, "truncation_order": 2, "seed": 1}"#,
        )
        .unwrap();
        assert_eq!(dq_scene_from_json(bad.as_ptr(), &mut scene), DqStatus::Config);
        assert!(scene.is_null());
        assert!(last_error().contains("(1,2,1)"), "{}", last_error());
        assert_eq!(dq_scene_load(ptr::null(), &mut scene), DqStatus::NullArgument);
        assert_eq!(dq_scene_order(ptr::null()), -1);
        assert_eq!(dq_scene_load(scene_path("aff1.json").as_ptr(), &mut scene), DqStatus::Ok);
        let mut report = ptr::null_mut();
        let nope = CString::new("nope").unwrap();
        assert_eq!(dq_run_suite(scene, nope.as_ptr(), &mut report), DqStatus::Config);
        let crossed = CString::new("crossed").unwrap();
        assert_eq!(dq_run_suite(scene, crossed.as_ptr(), &mut report), DqStatus::Ok);
        let mut s = 0usize;
        assert_eq!(dq_report_counts(report, ptr::null_mut(), ptr::null_mut(), &mut s), DqStatus::Ok);
        assert_eq!(s, 1);
        dq_report_free(report);
        dq_scene_free(scene);
        dq_scene_free(ptr::null_mut());
        dq_string_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_every_entry_point() {
    let h = std::fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/dqred.h")).unwrap();
    for f in [
        "dq_last_error",
        "dq_scene_load",
        "dq_scene_from_json",
        "dq_scene_order",
        "dq_scene_free",
        "dq_run_suite",
        "dq_report_counts",
        "dq_report_render",
        "dq_report_free",
        "dq_string_free",
        "DQ_STATUS_CONFIG",
    ] {
        assert!(h.contains(f), "{f} missing from header");
    }
}

/// Compiles and runs a small C program against the static library.
#[test]
fn c_program_links_against_the_header() {
    let Ok(exe) = std::env::current_exe() else { return };
    let lib_dir = exe.parent().and_then(|d| d.parent()).unwrap().to_path_buf();
    let lib = lib_dir.join("libdqred_ffi.a");
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no static library or C compiler");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    std::fs::write(
        &src,
        r#"#include <stdio.h>
#include "dqred.h"
int main(int argc, char **argv) {
    DqScene *s = NULL; DqReport *r = NULL; size_t p = 0, f = 0, k = 0;
    if (dq_scene_load(argv[1], &s) != DQ_STATUS_OK) { fprintf(stderr, "%s\n", dq_last_error()); return 3; }
    if (dq_run_suite(s, "koszul", &r) != DQ_STATUS_OK) return 4;
    dq_report_counts(r, &p, &f, &k);
    printf("%zu %zu %zu\n", p, f, k);
    dq_report_free(r); dq_scene_free(s);
    return f == 0 ? 0 : 1;
}
"#,
    )
    .unwrap();
    let bin = dir.path().join("main");
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    let st = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(st.success());
    let out = Command::new(&bin).arg(scene_path("abelian1.json").to_str().unwrap()).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let counts = String::from_utf8(out.stdout).unwrap();
    assert!(counts.trim().ends_with("0 0"), "{counts}");
}
