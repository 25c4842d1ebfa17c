use std::ffi::{c_char, CStr, CString};
use std::ptr;

use copylab::intuitionistic::IntuitionisticOutcome;
use copylab::lab::DistinctnessReport;
use copylab_ffi::*;

fn parse(text: &str) -> *mut CopylabFormula {
    let c = CString::new(text).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { copylab_parse(c.as_ptr(), &mut out) }, CopylabStatus::Ok);
    out
}

fn take(s: *mut c_char) -> String {
    let owned = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { copylab_string_free(s) };
    owned
}

fn print(f: *const CopylabFormula) -> String {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { copylab_print(f, &mut s) }, CopylabStatus::Ok);
    take(s)
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(copylab_last_error_message()) }.to_str().unwrap().to_string()
}

#[test]
fn parse_print_round_trip() {
    let f = parse("forall x. (P(x) -> exists y. R(x, y))");
    assert_eq!(print(f), "forall x. (P(x) -> exists y. R(x,y))");
    unsafe { copylab_formula_free(f) };
    assert_eq!(last_error(), "");
}

#[test]
fn parse_error_status_and_message() {
    let c = CString::new("P /\\").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { copylab_parse(c.as_ptr(), &mut out) }, CopylabStatus::ParseError);
    assert!(out.is_null());
    assert!(last_error().contains("1:5"), "{}", last_error());

    let bad = [0xffu8, 0];
    assert_eq!(unsafe { copylab_parse(bad.as_ptr().cast(), &mut out) }, CopylabStatus::InvalidUtf8);
}

#[test]
fn translate_kinds() {
    let f = parse("P \\/ Q");
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { copylab_translate(f, CopylabKind::Kolmogorov, ptr::null(), &mut out) }, CopylabStatus::Ok);
    assert_eq!(print(out), "~~(~~P \\/ ~~Q)");
    unsafe { copylab_formula_free(out) };

    assert_eq!(unsafe { copylab_translate(f, CopylabKind::VeeF, ptr::null(), &mut out) }, CopylabStatus::Ok);
    assert!(print(out).ends_with("\\/ ~(forall x. ~~P(x) -> forall x. P(x))"));
    unsafe { copylab_formula_free(out) };

    let open = parse("P(x)");
    assert_eq!(unsafe { copylab_translate(f, CopylabKind::SubstF, open, &mut out) }, CopylabStatus::InvalidArgument);
    assert_eq!(unsafe { copylab_translate(f, CopylabKind::Kuroda, open, &mut out) }, CopylabStatus::InvalidArgument);
    unsafe {
        copylab_formula_free(open);
        copylab_formula_free(f);
    }
}

#[test]
fn provers() {
    let lem = parse("P \\/ ~P");
    let mut verdict = CopylabVerdict::Unknown;
    assert_eq!(unsafe { copylab_prove_classical(lem, 5, &mut verdict, ptr::null_mut()) }, CopylabStatus::Ok);
    assert_eq!(verdict, CopylabVerdict::Proved);

    let mut json = ptr::null_mut();
    assert_eq!(unsafe { copylab_prove_il(lem, 5, &mut verdict, &mut json) }, CopylabStatus::Ok);
    assert_eq!(verdict, CopylabVerdict::Refuted);
    let outcome: IntuitionisticOutcome = serde_json::from_str(&take(json)).unwrap();
    let IntuitionisticOutcome::Refuted { model, .. } = outcome else { panic!("expected a countermodel") };
    assert_eq!(model.worlds.len(), 2);

    assert_eq!(unsafe { copylab_prove_il(lem, 0, &mut verdict, ptr::null_mut()) }, CopylabStatus::InvalidArgument);
    assert_eq!(unsafe { copylab_prove_il(ptr::null(), 3, &mut verdict, ptr::null_mut()) }, CopylabStatus::NullArgument);
    unsafe { copylab_formula_free(lem) };
}

#[test]
fn equivalence() {
    let a = parse("~~~P");
    let b = parse("~P");
    let lem = parse("P \\/ ~P");
    let nn = parse("~~(P \\/ ~P)");
    let mut out = CopylabEquiv::Unknown;
    assert_eq!(unsafe { copylab_il_equiv(a, b, 4, &mut out) }, CopylabStatus::Ok);
    assert_eq!(out, CopylabEquiv::Equivalent);
    assert_eq!(unsafe { copylab_il_equiv(lem, nn, 4, &mut out) }, CopylabStatus::Ok);
    assert_eq!(out, CopylabEquiv::NotEquivalent);
    for f in [a, b, lem, nn] {
        unsafe { copylab_formula_free(f) };
    }
}

#[test]
fn theorem_report() {
    let mut json = ptr::null_mut();
    let mut passed = false;
    assert_eq!(unsafe { copylab_theorem_json(ptr::null(), ptr::null(), 10, &mut json, &mut passed) }, CopylabStatus::Ok);
    assert!(passed);
    let report: DistinctnessReport = serde_json::from_str(&take(json)).unwrap();
    assert!(report.passes());

    let unary = parse("P('a)");
    let status = unsafe { copylab_theorem_json(ptr::null(), unary, 10, &mut json, &mut passed) };
    assert_eq!(status, CopylabStatus::InvalidArgument);
    unsafe { copylab_formula_free(unary) };
}

#[test]
fn header_compiles_and_links() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = dir.join("include/copylab.h");
    assert!(header.exists());
    // target/<profile>/deps/<test binary> -> target/<profile>
    let profile_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = profile_dir.join("libcopylab_ffi.a");
    let tmp = tempfile::tempdir().unwrap();
    let exe = tmp.path().join("smoke");
    let status = std::process::Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(dir.join("include"))
        .arg(dir.join("tests/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .arg("-o")
        .arg(&exe)
        .status()
        .expect("cc runs");
    assert!(status.success(), "C smoke test failed to build against {}", lib.display());
    let out = std::process::Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "~~(~~P \\/ ~~Q)\nproved\nerror 3\n");
}
