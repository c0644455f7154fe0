use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use chainforge_ffi::*;

fn take(s: *mut std::ffi::c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { cf_string_free(s) };
    out
}

#[test]
fn table_round_trip() {
    let mut t = ptr::null_mut();
    let st = unsafe { cf_weight_table_new(3, 2, 2, CfMethod::Generic, CfFamily::Basic, &mut t) };
    assert_eq!(st, CfStatus::Ok);
    let mut len = 0;
    assert_eq!(unsafe { cf_weight_table_len(t, &mut len) }, CfStatus::Ok);
    assert_eq!(len, 7);
    let mut owner = CfOwner::default();
    let mut w = ptr::null_mut();
    assert_eq!(
        unsafe { cf_weight_table_entry(t, 0, &mut owner, &mut w) },
        CfStatus::Ok
    );
    assert!(!owner.is_layer);
    assert!(take(w).ends_with("/1"));
    assert_eq!(
        unsafe { cf_weight_table_entry(t, 99, &mut owner, ptr::null_mut()) },
        CfStatus::OutOfRange
    );
    assert!(take(cf_last_error_message()).contains("entry 99"));
    let mut passed = false;
    assert_eq!(
        unsafe { cf_weight_table_verify(t, CfMode::Point, &mut passed) },
        CfStatus::Ok
    );
    assert!(passed);
    let mut json = ptr::null_mut();
    assert_eq!(
        unsafe { cf_weight_table_to_json(t, &mut json) },
        CfStatus::Ok
    );
    assert!(take(json).contains("\"entries\""));
    unsafe { cf_weight_table_free(t) };
}

#[test]
fn error_codes() {
    let mut t = ptr::null_mut();
    let st =
        unsafe { cf_weight_table_new(3, 1, 2, CfMethod::Generic, CfFamily::AntiBasic, &mut t) };
    assert_eq!(st, CfStatus::Unsupported);
    assert!(t.is_null());
    let st = unsafe {
        cf_weight_table_new(3, 2, 2, CfMethod::Generic, CfFamily::Basic, ptr::null_mut())
    };
    assert_eq!(st, CfStatus::NullPointer);
    let mut len = 0;
    assert_eq!(
        unsafe { cf_weight_table_len(ptr::null(), &mut len) },
        CfStatus::NullPointer
    );
    let mut v = CfVerdict {
        status: CfVerdictStatus::Fail,
        mis: 0,
        unique: 0,
        maximum_sets: 0,
        certified: false,
    };
    assert_eq!(
        unsafe { cf_certify(3, 4, 1, CfClaim::Theorem, 0, &mut v) },
        CfStatus::Unsupported
    );
    let name = CString::new("no_such_lemma").unwrap();
    let mut passed = false;
    let st = unsafe { cf_check_lemma(name.as_ptr(), 4, 2, &mut passed, ptr::null_mut()) };
    assert_eq!(st, CfStatus::InvalidArgument);
}

#[test]
fn certify_and_lemmas() {
    let mut v = CfVerdict {
        status: CfVerdictStatus::Fail,
        mis: 0,
        unique: 0,
        maximum_sets: 0,
        certified: false,
    };
    assert_eq!(
        unsafe { cf_certify(3, 2, 2, CfClaim::Theorem, 0, &mut v) },
        CfStatus::Ok
    );
    assert_eq!(v.status, CfVerdictStatus::Pass);
    assert_eq!(v.unique, 1);
    assert_eq!(
        unsafe { cf_certify(5, 2, 2, CfClaim::Theorem, 0, &mut v) },
        CfStatus::Ok
    );
    assert_eq!(v.status, CfVerdictStatus::Incomplete);
    assert_eq!(v.mis, -1);
    let name = CString::new("inner_W_eq_U_diff").unwrap();
    let (mut passed, mut failures) = (false, 1u64);
    assert_eq!(
        unsafe { cf_check_lemma(name.as_ptr(), 8, 2, &mut passed, &mut failures) },
        CfStatus::Ok
    );
    assert!(passed);
    assert_eq!(failures, 0);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { cf_layer_size(4, 2, 4, &mut s) }, CfStatus::Ok);
    assert_eq!(take(s), "19");
    let version = unsafe { CStr::from_ptr(cf_version()) }.to_str().unwrap();
    assert_eq!(version, env!("CARGO_PKG_VERSION"));
}

fn header_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include")
}

fn have_cc() -> bool {
    Command::new("cc").arg("--version").output().is_ok()
}

#[test]
fn header_compiles() {
    if !have_cc() {
        eprintln!("cc not found; skipping");
        return;
    }
    for lang in ["c", "c++"] {
        let out = Command::new("cc")
            .args(["-fsyntax-only", "-Wall", "-Werror", "-x", lang])
            .arg(header_dir().join("chainforge.h"))
            .output()
            .unwrap();
        assert!(
            out.status.success(),
            "{lang}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "chainforge.h"

int main(void) {
    CfWeightTable *t = NULL;
    if (cf_weight_table_new(4, 1, 2, CF_METHOD_FAST, CF_FAMILY_BASIC, &t) != CF_STATUS_OK) return 1;
    size_t len = 0;
    cf_weight_table_len(t, &len);
    bool ok = false;
    cf_weight_table_verify(t, CF_MODE_TYPE, &ok);
    char *json = NULL;
    cf_weight_table_to_json(t, &json);
    int has_entries = strstr(json, "entries") != NULL;
    cf_string_free(json);
    cf_weight_table_free(t);
    if (cf_weight_table_new(1, 1, 1, CF_METHOD_FAST, CF_FAMILY_ANTI_BASIC, &t) != CF_STATUS_UNSUPPORTED) return 2;
    char *msg = cf_last_error_message();
    printf("%zu %d %d %s\n", len, ok, has_entries, msg ? "err" : "none");
    cf_string_free(msg);
    return 0;
}
"#;

#[test]
fn c_program_links() {
    if !have_cc() {
        eprintln!("cc not found; skipping");
        return;
    }
    // target/<profile>/deps/abi-xxxx -> target/<profile>
    let exe = std::env::current_exe().unwrap();
    let lib_dir = exe.parent().and_then(Path::parent).unwrap().to_path_buf();
    if !lib_dir.join("libchainforge_ffi.so").exists() {
        eprintln!("shared library not built; skipping");
        return;
    }
    let work = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("c_program");
    std::fs::create_dir_all(&work).unwrap();
    let src = work.join("main.c");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let bin = work.join("main");
    let out = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(header_dir())
        .arg("-L")
        .arg(&lib_dir)
        .arg(format!("-Wl,-rpath,{}", lib_dir.display()))
        .args(["-lchainforge_ffi", "-o"])
        .arg(&bin)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let run = Command::new(&bin).output().unwrap();
    assert!(run.status.success(), "exit {:?}", run.status);
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "4 1 1 err");
}
