use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use pcakit::samples::{ANBN_MACHINE, PROPERTY_CONDITION, PROPERTY_PCA, PROPERTY_PROGRAM, SELF_PATTERN_CONDITION};
use pcakit_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(p: *mut c_char) -> String {
    let s = CStr::from_ptr(p).to_str().unwrap().to_string();
    pcakit_string_free(p);
    s
}

unsafe fn last_error() -> String {
    CStr::from_ptr(pcakit_last_error()).to_str().unwrap().to_string()
}

#[test]
fn condition_handles() {
    unsafe {
        let mut h = ptr::null_mut();
        assert_eq!(pcakit_condition_parse(c(PROPERTY_CONDITION).as_ptr(), &mut h), PcakitStatus::Ok);
        let mut zp = false;
        let mut report = ptr::null_mut();
        assert_eq!(pcakit_condition_check_priority(h, 0, &mut zp, &mut report), PcakitStatus::Ok);
        assert!(zp);
        assert!(take(report).contains("ordering: a b"));
        assert_eq!(pcakit_condition_check_priority(h, 1, &mut zp, &mut report), PcakitStatus::Ok);
        assert!(take(report).contains("\"zero_priority\": true"));
        pcakit_condition_free(h);

        assert_eq!(pcakit_condition_parse(c(SELF_PATTERN_CONDITION).as_ptr(), &mut h), PcakitStatus::Ok);
        assert_eq!(pcakit_condition_check_priority(h, 0, &mut zp, ptr::null_mut()), PcakitStatus::Ok);
        assert!(!zp);
        pcakit_condition_free(h);

        assert_eq!(pcakit_condition_parse(c("states q0").as_ptr(), &mut h), PcakitStatus::Parse);
        assert!(last_error().contains("line 1"));
        assert_eq!(pcakit_condition_parse(ptr::null(), &mut h), PcakitStatus::NullArgument);
        let bad = [0xffu8, 0];
        assert_eq!(pcakit_condition_parse(bad.as_ptr().cast(), &mut h), PcakitStatus::InvalidUtf8);
        pcakit_condition_free(ptr::null_mut());
    }
}

#[test]
fn automaton_membership_and_compile() {
    unsafe {
        let mut a = ptr::null_mut();
        assert_eq!(pcakit_automaton_parse(c(PROPERTY_PCA).as_ptr(), &mut a), PcakitStatus::Ok);
        let mut acc = false;
        for (w, want) in [("a:1 b:2 a:1", true), ("a:1 a:1", false), ("a:1 b:1 a:1", false)] {
            assert_eq!(pcakit_automaton_accepts(a, c(w).as_ptr(), &mut acc), PcakitStatus::Ok);
            assert_eq!(acc, want, "{w}");
        }
        assert_eq!(pcakit_automaton_accepts(a, c("a:x").as_ptr(), &mut acc), PcakitStatus::Parse);
        assert_eq!(pcakit_automaton_accepts(a, c("z:1").as_ptr(), &mut acc), PcakitStatus::Input);
        assert!(!last_error().is_empty());

        let mut m = ptr::null_mut();
        assert_eq!(pcakit_automaton_compile(a, &mut m), PcakitStatus::Ok);
        assert!(pcakit_machine_is_priority(m));
        assert!(pcakit_machine_counters(m) > 1);
        let mut words = ptr::null_mut();
        let mut exact = false;
        assert_eq!(pcakit_machine_explore(m, 2, 8, 100_000, &mut words, &mut exact), PcakitStatus::Ok);
        assert!(exact);
        assert_eq!(take(words), "a\nb\na a\na b\nb a\nb b\n");
        pcakit_machine_free(m);
        pcakit_automaton_free(a);

        let bad = PROPERTY_PCA.replace("ordering: a b", "ordering: b a");
        assert_eq!(pcakit_automaton_parse(c(&bad).as_ptr(), &mut a), PcakitStatus::Construction);
    }
}

#[test]
fn machine_round_trip() {
    unsafe {
        let mut m = ptr::null_mut();
        assert_eq!(pcakit_machine_parse(c(ANBN_MACHINE).as_ptr(), &mut m), PcakitStatus::Ok);
        let mut t = ptr::null_mut();
        assert_eq!(pcakit_machine_to_text(m, &mut t), PcakitStatus::Ok);
        let text = take(t);
        let mut m2 = ptr::null_mut();
        assert_eq!(pcakit_machine_parse(c(&text).as_ptr(), &mut m2), PcakitStatus::Ok);
        let (mut w, mut exact) = (ptr::null_mut(), false);
        assert_eq!(pcakit_machine_explore(m2, 4, 4, 1000, &mut w, &mut exact), PcakitStatus::Ok);
        assert_eq!(take(w), "a b\na a b b\n");
        pcakit_machine_free(m);
        pcakit_machine_free(m2);
        assert_eq!(pcakit_machine_counters(ptr::null()), 0);
    }
}

#[test]
fn program_reachability() {
    unsafe {
        let mut p = ptr::null_mut();
        assert_eq!(pcakit_program_parse(c(PROPERTY_PROGRAM).as_ptr(), &mut p), PcakitStatus::Ok);
        let (mut w, mut trunc) = (ptr::null_mut(), true);
        let target = c("b1=false b2=false b3=true");
        assert_eq!(pcakit_program_reachable(p, target.as_ptr(), 3, &mut w, &mut trunc), PcakitStatus::Ok);
        assert!(!trunc);
        assert_eq!(take(w), "a:1 a:1");
        let target = c("b1=true b2=true b3=true");
        assert_eq!(pcakit_program_reachable(p, target.as_ptr(), 3, &mut w, &mut trunc), PcakitStatus::Ok);
        assert!(w.is_null());
        assert_eq!(pcakit_program_reachable(p, c("b3=true").as_ptr(), 3, &mut w, &mut trunc), PcakitStatus::Input);
        pcakit_program_free(p);
        assert_eq!(pcakit_program_parse(c("sigma: a\nif then").as_ptr(), &mut p), PcakitStatus::Parse);
    }
}

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn exported_symbols() -> Vec<String> {
    let src = std::fs::read_to_string(crate_dir().join("src/lib.rs")).unwrap();
    src.lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap().to_string())
        .collect()
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(crate_dir().join("include/pcakit.h")).unwrap();
    let syms = exported_symbols();
    assert!(syms.len() >= 18);
    for s in &syms {
        assert!(header.contains(&format!(" {s}(")) || header.contains(&format!("*{s}(")), "{s} missing from header");
    }
}

fn cc() -> Option<String> {
    ["cc", "gcc", "clang"]
        .into_iter()
        .find(|c| Command::new(c).arg("--version").output().is_ok())
        .map(str::to_string)
}

/// Directory holding the cdylib next to this test binary.
fn lib_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_the_library() {
    let cc = cc().expect("a C compiler is required for the C ABI test");
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("c_abi");
    std::fs::create_dir_all(&dir).unwrap();
    let main = dir.join("main.c");
    std::fs::write(
        &main,
        r#"#include <stdio.h>
#include <string.h>
#include "pcakit.h"

static const char *COND =
  "alphabet: a\nstates: q0\ninitial: q0\naccepting: q0\n"
  "trans: q0 a 0 q0\ntrans: q0 a 1 q0\n";

int main(void) {
  PcakitCondition *c = NULL;
  if (pcakit_condition_parse(COND, &c) != PCAKIT_OK) return 10;
  bool zp = false;
  char *report = NULL;
  if (pcakit_condition_check_priority(c, 0, &zp, &report) != PCAKIT_OK || !zp) return 11;
  if (strstr(report, "0-priority") == NULL) return 12;
  pcakit_string_free(report);
  pcakit_condition_free(c);
  if (pcakit_condition_parse("nonsense", &c) != PCAKIT_PARSE) return 13;
  if (strlen(pcakit_last_error()) == 0) return 14;
  printf("ok %s\n", pcakit_version());
  return 0;
}
"#,
    )
    .unwrap();
    let exe = dir.join("main");
    let lib = lib_dir();
    assert!(lib.join("libpcakit_ffi.so").exists() || lib.join("libpcakit_ffi.dylib").exists(), "cdylib not found in {}", lib.display());
    let status = Command::new(&cc)
        .arg("-std=c11")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(crate_dir().join("include"))
        .arg(&main)
        .arg("-L")
        .arg(&lib)
        .arg("-lpcakit_ffi")
        .arg("-o")
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).env("LD_LIBRARY_PATH", &lib).env("DYLD_LIBRARY_PATH", &lib).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout), format!("ok {}\n", env!("CARGO_PKG_VERSION")));
}
