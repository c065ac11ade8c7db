use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use tableaux_ffi::*;

const FAMILY: &str = r#"{"r": 3, "n": 3, "presentation": "coefficients", "characters": [3, 1, 0],
  "coefficients": [{"a": 2, "lambda": 1, "i": 2, "b": 3, "value": "1"},
                   {"a": 2, "lambda": 1, "i": 3, "b": 2, "value": "1"},
                   {"a": 3, "lambda": 1, "i": 3, "b": 3, "value": "2"}]}"#;

fn load(json: &str) -> (TableauxStatus, *mut TableauxTableau) {
    let c = CString::new(json).unwrap();
    let mut t = ptr::null_mut();
    let s = unsafe { tableaux_tableau_from_json(c.as_ptr(), &mut t) };
    (s, t)
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(tableaux_last_error()) }.to_string_lossy().into_owned()
}

#[test]
fn report_through_handles() {
    let (s, t) = load(FAMILY);
    assert_eq!(s, TableauxStatus::Ok);
    let (mut r, mut n, mut dim) = (0, 0, 0);
    unsafe {
        assert_eq!(tableaux_tableau_shape(t, &mut r, &mut n, &mut dim), TableauxStatus::Ok);
        assert_eq!((r, n, dim), (3, 3, 4));
        let mut rep = ptr::null_mut();
        assert_eq!(tableaux_cartan_test(t, 0, 0, TableauxVariant::Theorem, &mut rep), TableauxStatus::Ok);
        let (mut inv, mut d1, mut bound, mut crit, mut viol) = (true, 0, 0, 9, 0);
        tableaux_report_summary(rep, &mut inv, &mut d1, &mut bound, &mut crit, &mut viol);
        assert!(!inv);
        assert_eq!((d1, bound, crit), (4, 5, 0));
        assert!(viol >= 1);

        let mut buf = [0usize; 2];
        let mut len = buf.len();
        assert_eq!(tableaux_report_characters(rep, buf.as_mut_ptr(), &mut len), TableauxStatus::BufferTooSmall);
        assert_eq!(len, 3);
        let mut buf = [0usize; 3];
        assert_eq!(tableaux_report_characters(rep, buf.as_mut_ptr(), &mut len), TableauxStatus::Ok);
        assert_eq!(buf, [3, 1, 0]);

        let mut json = ptr::null_mut();
        assert_eq!(tableaux_report_to_json(rep, &mut json), TableauxStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(CStr::from_ptr(json).to_str().unwrap()).unwrap();
        assert_eq!(v["dim_a1"], 4);
        tableaux_string_free(json);
        tableaux_report_free(rep);
        tableaux_tableau_free(t);
    }
}

#[test]
fn errors_are_codes_with_messages() {
    let (s, t) = load(r#"{"r": 1, "n": 2, "presentation": "basis", "basis": [[["1", "1/0"]]]}"#);
    assert_eq!(s, TableauxStatus::InvalidDocument);
    assert!(t.is_null());
    assert!(last_error().contains("basis[0][0][1]"));

    let mut out = ptr::null_mut();
    assert_eq!(unsafe { tableaux_tableau_from_json(ptr::null(), &mut out) }, TableauxStatus::NullPointer);
    assert_eq!(
        unsafe { tableaux_tableau_shape(ptr::null(), ptr::null_mut(), ptr::null_mut(), ptr::null_mut()) },
        TableauxStatus::NullPointer
    );
    let chars = [1usize, 2];
    let mut text = ptr::null_mut();
    let s = unsafe { tableaux_ideal(chars.as_ptr(), 2, TableauxVariant::Theorem, &mut text) };
    assert_eq!(s, TableauxStatus::InvalidArgument);
    unsafe {
        tableaux_tableau_free(ptr::null_mut());
        tableaux_report_free(ptr::null_mut());
        tableaux_string_free(ptr::null_mut());
    }
}

#[test]
fn ideal_text() {
    let chars = [1usize, 1, 0, 0];
    let mut text = ptr::null_mut();
    let s = unsafe { tableaux_ideal(chars.as_ptr(), chars.len(), TableauxVariant::Proof, &mut text) };
    assert_eq!(s, TableauxStatus::Ok);
    let out = unsafe { CStr::from_ptr(text) }.to_string_lossy().into_owned();
    unsafe { tableaux_string_free(text) };
    assert!(out.starts_with("# 1 generators\n"), "{out}");
}

#[test]
fn header_lists_the_api() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let h = std::fs::read_to_string(dir.join("include/tableaux.h")).unwrap();
    for name in [
        "tableaux_tableau_from_json",
        "tableaux_cartan_test",
        "tableaux_report_summary",
        "tableaux_ideal",
        "tableaux_last_error",
        "TABLEAUX_STATUS_INVALID_DOCUMENT",
    ] {
        assert!(h.contains(name), "{name} missing from header");
    }
}

/// Compiles a small C program against the header and the static library.
#[test]
fn c_program_links_and_runs() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|d| d.parent()).unwrap();
    let lib = profile_dir.join("libtableaux_ffi.a");
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler or static library");
        return;
    }
    let tmp = tempfile::tempdir().unwrap();
    let bin = tmp.path().join("smoke");
    let status = Command::new("cc")
        .arg(dir.join("tests/smoke.c"))
        .arg("-I")
        .arg(dir.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    assert_eq!(String::from_utf8_lossy(&out.stdout), "involutive=1 dim_a1=5 bound=5 chars=3,1,0\n");
}
