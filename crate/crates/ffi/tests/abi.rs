use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use epsolve_ffi::*;

const FIXTURE: &str = include_str!("../../core/fixtures/counterexample.json");

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    ep_string_free(s);
    out
}

unsafe fn last_error() -> String {
    CStr::from_ptr(ep_last_error()).to_str().unwrap().to_owned()
}

#[test]
fn poset_handles() {
    unsafe {
        let mut p = ptr::null_mut();
        let json = cstr(r#"{"elems": ["0", "1"], "leq": [[true, true], [false, true]], "bottom": "0"}"#);
        assert_eq!(ep_poset_from_json(json.as_ptr(), &mut p), EpStatus::Ok);
        let mut n = 0;
        assert_eq!(ep_poset_len(p, &mut n), EpStatus::Ok);
        assert_eq!(n, 2);
        let mut b = false;
        assert_eq!(ep_poset_leq(p, 0, 1, &mut b), EpStatus::Ok);
        assert!(b);
        assert_eq!(ep_poset_leq(p, 1, 0, &mut b), EpStatus::Ok);
        assert!(!b);
        assert_eq!(ep_poset_leq(p, 0, 5, &mut b), EpStatus::Invalid);

        let mut s = ptr::null_mut();
        assert_eq!(ep_poset_canonical_form(p, &mut s), EpStatus::Ok);
        let form = take(s);
        assert_eq!(ep_poset_to_json(p, &mut s), EpStatus::Ok);
        let back = cstr(&take(s));
        let mut q = ptr::null_mut();
        assert_eq!(ep_poset_from_json(back.as_ptr(), &mut q), EpStatus::Ok);
        assert_eq!(ep_poset_canonical_form(q, &mut s), EpStatus::Ok);
        assert_eq!(take(s), form);
        ep_poset_free(p);
        ep_poset_free(q);
        ep_poset_free(ptr::null_mut());
    }
}

#[test]
fn error_codes_and_messages() {
    unsafe {
        let mut p = ptr::null_mut();
        assert_eq!(ep_poset_from_json(ptr::null(), &mut p), EpStatus::NullArgument);
        assert!(p.is_null());
        assert_eq!(ep_poset_from_json(cstr("{").as_ptr(), &mut p), EpStatus::Json);
        let cyclic = cstr(r#"{"elems": ["a", "b"], "leq": [[true, true], [true, true]], "bottom": null}"#);
        assert_eq!(ep_poset_from_json(cyclic.as_ptr(), &mut p), EpStatus::Invalid);
        assert!(last_error().contains("antisymmetry"));
        let bad = [0xffu8, 0];
        assert_eq!(ep_poset_from_json(bad.as_ptr().cast(), &mut p), EpStatus::InvalidUtf8);
        let mut n = 0;
        assert_eq!(ep_poset_len(ptr::null(), &mut n), EpStatus::NullArgument);
        let mut s = ptr::null_mut();
        assert_eq!(ep_solve(cstr("D = lift(").as_ptr(), 2, &mut s, ptr::null_mut()), EpStatus::Syntax);
        assert!(last_error().contains("column 10"));
        assert_eq!(ep_solve(cstr("D = lift(D)").as_ptr(), 99, &mut s, ptr::null_mut()), EpStatus::CapExceeded);
    }
}

#[test]
fn errors_are_per_thread() {
    unsafe {
        let mut p = ptr::null_mut();
        assert_eq!(ep_poset_from_json(cstr("[").as_ptr(), &mut p), EpStatus::Json);
        std::thread::spawn(|| assert!(ep_last_error().is_null())).join().unwrap();
        assert!(!ep_last_error().is_null());
    }
}

#[test]
fn counterexample_cocone() {
    unsafe {
        let mut k = ptr::null_mut();
        assert_eq!(ep_cocone_from_json(cstr(FIXTURE).as_ptr(), &mut k), EpStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(ep_cocone_check_ld(k, &mut s), EpStatus::Ok);
        let ld: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
        assert_eq!(ld["verdict"], false);
        assert_eq!(ld["defects"], serde_json::json!([1, 1, 1]));
        let mut colim = true;
        assert_eq!(ep_cocone_is_colimiting(k, &mut colim), EpStatus::Ok);
        assert!(!colim);

        assert_eq!(ep_cocone_to_json(k, &mut s), EpStatus::Ok);
        let again = cstr(&take(s));
        let mut k2 = ptr::null_mut();
        assert_eq!(ep_cocone_from_json(again.as_ptr(), &mut k2), EpStatus::Ok);
        ep_cocone_free(k);
        ep_cocone_free(k2);
    }
}

#[test]
fn solve_report() {
    unsafe {
        let mut s = ptr::null_mut();
        let mut passed = false;
        assert_eq!(ep_solve(cstr("D = lift(D)").as_ptr(), 4, &mut s, &mut passed), EpStatus::Ok);
        assert!(passed);
        let r: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
        let sizes: Vec<u64> = r["stages"].as_array().unwrap().iter().map(|s| s["size"].as_u64().unwrap()).collect();
        assert_eq!(sizes, vec![1, 2, 3, 4, 5]);
        assert_eq!(r["defect_matrix"][4], serde_json::json!([4, 3, 2, 1, 0]));
        assert_eq!(CStr::from_ptr(ep_version()).to_str().unwrap(), env!("CARGO_PKG_VERSION"));
    }
}

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(crate_dir().join("include/epsolve.h")).unwrap();
    let src = std::fs::read_to_string(crate_dir().join("src/lib.rs")).unwrap();
    let exports: Vec<&str> = src
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 12);
    for name in exports {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
    assert!(header.contains("typedef struct EpPoset EpPoset;"));
    assert!(header.contains("EP_STATUS_CAP_EXCEEDED = 6"));
}

/// Directory holding the library artifacts next to this test binary.
fn artifact_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_static_library() {
    let lib = artifact_dir().join("libepsolve_ffi.a");
    assert!(lib.exists(), "{} not built", lib.display());
    let out = std::env::temp_dir().join(format!("epsolve_smoke_{}", std::process::id()));
    let status = Command::new(std::env::var("CC").unwrap_or_else(|_| "cc".into()))
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(crate_dir().join("include"))
        .arg(crate_dir().join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .status()
        .expect("C compiler");
    assert!(status.success());
    let run = Command::new(&out).output().unwrap();
    let _ = std::fs::remove_file(&out);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert!(String::from_utf8_lossy(&run.stdout).starts_with("ok "));
}
