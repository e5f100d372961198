use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use fpc_ffi::*;

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/corpus")
}

fn take(s: *mut std::ffi::c_char) -> String {
    assert!(!s.is_null());
    let v = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { fpc_string_free(s) };
    v
}

fn last_error() -> String {
    let p = fpc_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn embedded_ledger_round_trip() {
    let mut l = ptr::null_mut();
    assert_eq!(unsafe { fpc_ledger_embedded(&mut l) }, FpcStatus::Ok);
    assert!(fpc_last_error().is_null());
    unsafe {
        assert_eq!(fpc_ledger_len(l), 30);
        assert_eq!(fpc_ledger_falsified(l), 0);
        let mut s = ptr::null_mut();
        assert_eq!(fpc_ledger_gamma(l, 8, &mut s), FpcStatus::Ok);
        assert_eq!(take(s), "2");
        assert_eq!(fpc_ledger_gamma(l, 12, &mut s), FpcStatus::Ok);
        assert_eq!(take(s), "42/19");
        assert_eq!(fpc_ledger_gamma(l, 0, &mut s), FpcStatus::Ok);
        assert!(s.is_null());

        assert_eq!(fpc_ledger_json(l, &mut s), FpcStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
        assert!(v["facts"]["gamma512"].is_object());

        assert_eq!(fpc_containment_json(l, 57, 2, &mut s), FpcStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["status"], "certified");
        assert_eq!(v["case"], "case4");

        assert_eq!(fpc_containment_json(l, 0, 2, &mut s), FpcStatus::Input);
        assert!(last_error().contains("positive"));
        fpc_ledger_free(l);
    }
}

#[test]
fn verify_directory() {
    let dir = CString::new(corpus_dir().to_str().unwrap()).unwrap();
    let mut l = ptr::null_mut();
    assert_eq!(unsafe { fpc_verify_dir(dir.as_ptr(), &mut l) }, FpcStatus::Ok);
    assert_eq!(unsafe { fpc_ledger_len(l) }, 30);
    unsafe { fpc_ledger_free(l) };
}

#[test]
fn falsified_and_bad_directories() {
    let tmp = tempfile::tempdir().unwrap();
    for e in std::fs::read_dir(corpus_dir()).unwrap() {
        let p = e.unwrap().path();
        let text = std::fs::read_to_string(&p).unwrap();
        let text = if p.ends_with("vargamma_n12.cert") {
            text.replacen("k=-28m-4", "k=-28m-5", 1)
        } else {
            text
        };
        std::fs::write(tmp.path().join(p.file_name().unwrap()), text).unwrap();
    }
    let dir = CString::new(tmp.path().to_str().unwrap()).unwrap();
    let mut l = ptr::null_mut();
    assert_eq!(unsafe { fpc_verify_dir(dir.as_ptr(), &mut l) }, FpcStatus::Falsified);
    assert!(!l.is_null());
    assert!(unsafe { fpc_ledger_falsified(l) } >= 1);
    unsafe { fpc_ledger_free(l) };

    let missing = CString::new(tmp.path().join("nope").to_str().unwrap()).unwrap();
    assert_eq!(unsafe { fpc_verify_dir(missing.as_ptr(), &mut l) }, FpcStatus::Input);
    assert!(l.is_null());
    assert_eq!(unsafe { fpc_verify_dir(ptr::null(), &mut l) }, FpcStatus::NullPointer);
}

#[test]
fn dimension_calls() {
    let mut d = 0u64;
    let mults = [7i64; 5];
    assert_eq!(unsafe { fpc_dimension(mults.as_ptr(), 5, 12, 32003, 1, &mut d) }, FpcStatus::Ok);
    assert_eq!(d, 45);
    assert_eq!(unsafe { fpc_dimension(ptr::null(), 0, 3, 32003, 1, &mut d) }, FpcStatus::Ok);
    assert_eq!(d, 20);
    assert_eq!(unsafe { fpc_dimension(mults.as_ptr(), 5, 12, 32000, 1, &mut d) }, FpcStatus::Oracle);
    assert!(last_error().contains("not prime"));
    assert_eq!(unsafe { fpc_dimension(ptr::null(), 2, 3, 32003, 1, &mut d) }, FpcStatus::NullPointer);
    assert_eq!(unsafe { fpc_dimension(mults.as_ptr(), 5, 12, 32003, 1, ptr::null_mut()) }, FpcStatus::NullPointer);
}

#[test]
fn null_handles_are_harmless() {
    unsafe {
        fpc_ledger_free(ptr::null_mut());
        fpc_string_free(ptr::null_mut());
        assert_eq!(fpc_ledger_len(ptr::null()), 0);
        let mut s = ptr::null_mut();
        assert_eq!(fpc_ledger_json(ptr::null(), &mut s), FpcStatus::NullPointer);
    }
}

/// Compiles a small C program against the generated header and the static
/// library, when a C compiler is available.
#[test]
fn header_compiles_and_links() {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("no C compiler, skipping");
        return;
    }
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = manifest.join("include/fpc.h");
    assert!(header.exists());
    // test binary lives in target/<profile>/deps
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap();
    let lib = profile_dir.join("libfpc_ffi.a");
    if !lib.exists() {
        eprintln!("{} not built, skipping", lib.display());
        return;
    }
    let tmp = tempfile::tempdir().unwrap();
    let src = tmp.path().join("main.c");
    std::fs::write(
        &src,
        r#"#include <stdio.h>
#include "fpc.h"
int main(void) {
    int64_t m[5] = {7, 7, 7, 7, 7};
    uint64_t d = 0;
    if (fpc_dimension(m, 5, 12, 32003, 1, &d) != FPC_STATUS_OK) return 2;
    FpcLedger *l = NULL;
    if (fpc_ledger_embedded(&l) != FPC_STATUS_OK) return 3;
    char *g = NULL;
    fpc_ledger_gamma(l, 12, &g);
    printf("%llu %s %zu\n", (unsigned long long)d, g, fpc_ledger_len(l));
    fpc_string_free(g);
    fpc_ledger_free(l);
    return 0;
}
"#,
    )
    .unwrap();
    let bin = tmp.path().join("main");
    let status = Command::new(&cc)
        .arg(&src)
        .arg("-I")
        .arg(header.parent().unwrap())
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "45 42/19 30\n");
}
