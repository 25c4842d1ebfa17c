//! C interface to copylab.
//!
//! Formulas cross the boundary as opaque `CopylabFormula` handles; strings
//! returned to the caller are NUL-terminated and owned by the caller, who
//! releases them with `copylab_string_free`. Every entry point returns a
//! `CopylabStatus`; on failure `copylab_last_error_message` describes it.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use copylab::classical::{prove_classical, ClassicalOutcome};
use copylab::intuitionistic::{il_equiv, prove_il, EquivOutcome, IntuitionisticOutcome};
use copylab::lab::{distinctness_suite, distinctness_suite_with_atom};
use copylab::translate::{TranslationKind, TranslationSpec};
use copylab::{Formula, TheoremInstanceF};

/// Opaque formula handle.
pub struct CopylabFormula(Formula);

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CopylabStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidArgument = 4,
    Internal = 5,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CopylabKind {
    Kolmogorov = 0,
    GoedelGentzen = 1,
    Kuroda = 2,
    Krivine = 3,
    VeeF = 4,
    SubstF = 5,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CopylabVerdict {
    Proved = 0,
    Refuted = 1,
    Unknown = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CopylabEquiv {
    Equivalent = 0,
    NotEquivalent = 1,
    Unknown = 2,
}

impl From<CopylabKind> for TranslationKind {
    fn from(k: CopylabKind) -> Self {
        match k {
            CopylabKind::Kolmogorov => TranslationKind::Kolmogorov,
            CopylabKind::GoedelGentzen => TranslationKind::GoedelGentzen,
            CopylabKind::Kuroda => TranslationKind::Kuroda,
            CopylabKind::Krivine => TranslationKind::Krivine,
            CopylabKind::VeeF => TranslationKind::VeeF,
            CopylabKind::SubstF => TranslationKind::SubstF,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Failure(CopylabStatus, String);

type Result<T> = std::result::Result<T, Failure>;

fn fail<T>(status: CopylabStatus, message: impl Into<String>) -> Result<T> {
    Err(Failure(status, message.into()))
}

fn guard(body: impl FnOnce() -> Result<()>) -> CopylabStatus {
    let outcome = catch_unwind(AssertUnwindSafe(body)).unwrap_or_else(|_| fail(CopylabStatus::Internal, "internal panic"));
    let (status, message) = match outcome {
        Ok(()) => (CopylabStatus::Ok, String::new()),
        Err(Failure(s, m)) => (s, m),
    };
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(message.replace('\0', " ")).unwrap_or_default());
    status
}

unsafe fn formula<'a>(f: *const CopylabFormula, what: &str) -> Result<&'a Formula> {
    match f.as_ref() {
        Some(h) => Ok(&h.0),
        None => fail(CopylabStatus::NullArgument, format!("{what} is null")),
    }
}

unsafe fn c_str<'a>(s: *const c_char, what: &str) -> Result<&'a str> {
    if s.is_null() {
        return fail(CopylabStatus::NullArgument, format!("{what} is null"));
    }
    CStr::from_ptr(s).to_str().or_else(|_| fail(CopylabStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn store<T>(out: *mut T, value: T, what: &str) -> Result<()> {
    if out.is_null() {
        return fail(CopylabStatus::NullArgument, format!("{what} is null"));
    }
    out.write(value);
    Ok(())
}

unsafe fn store_string(out: *mut *mut c_char, s: String) -> Result<()> {
    let c = CString::new(s).or_else(|_| fail(CopylabStatus::Internal, "string contains NUL"))?;
    store(out, c.into_raw(), "output string")
}

fn positive(bound: u32) -> Result<u32> {
    if bound == 0 {
        return fail(CopylabStatus::InvalidArgument, "bound must be at least 1");
    }
    Ok(bound)
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String> {
    serde_json::to_string(value).or_else(|e| fail(CopylabStatus::Internal, e.to_string()))
}

/// Parses `text` into a new handle stored in `*out`.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn copylab_parse(text: *const c_char, out: *mut *mut CopylabFormula) -> CopylabStatus {
    guard(|| {
        let t = c_str(text, "text")?;
        let f = copylab::parse(t).or_else(|e| fail(CopylabStatus::ParseError, format!("in `{t}`: {e}")))?;
        store(out, Box::into_raw(Box::new(CopylabFormula(f))), "out")
    })
}

/// # Safety
/// `f` must come from this library and not have been freed; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn copylab_formula_free(f: *mut CopylabFormula) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// # Safety
/// `s` must be a string returned by this library; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn copylab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Concrete syntax of `f`, re-parseable by `copylab_parse`.
///
/// # Safety
/// `f` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn copylab_print(f: *const CopylabFormula, out: *mut *mut c_char) -> CopylabStatus {
    guard(|| store_string(out, copylab::print(formula(f, "formula")?)))
}

/// Translation of `f`. `param_f` is the parameter for `VeeF` and `SubstF`;
/// null selects the default. It must be null for the other kinds.
///
/// # Safety
/// `f` must be a live handle, `param_f` a live handle or null, `out` valid.
/// `kind` must be one of the `CopylabKind` enumerators.
#[no_mangle]
pub unsafe extern "C" fn copylab_translate(
    f: *const CopylabFormula,
    kind: CopylabKind,
    param_f: *const CopylabFormula,
    out: *mut *mut CopylabFormula,
) -> CopylabStatus {
    guard(|| {
        let a = formula(f, "formula")?;
        let kind = TranslationKind::from(kind);
        let param = param_f.as_ref().map(|h| h.0.clone());
        let param = match param {
            None if kind.needs_parameter() => Some(TheoremInstanceF::default().formula().clone()),
            p => p,
        };
        let spec = TranslationSpec::new(kind, param).or_else(|e| fail(CopylabStatus::InvalidArgument, e.to_string()))?;
        store(out, Box::into_raw(Box::new(CopylabFormula(spec.apply(a)))), "out")
    })
}

/// Classical provability of `f`. When `cert_json` is not null it receives the
/// outcome with its certificate as JSON.
///
/// # Safety
/// `f` must be a live handle, `verdict` valid, `cert_json` valid or null.
#[no_mangle]
pub unsafe extern "C" fn copylab_prove_classical(
    f: *const CopylabFormula,
    bound: u32,
    verdict: *mut CopylabVerdict,
    cert_json: *mut *mut c_char,
) -> CopylabStatus {
    guard(|| {
        let a = formula(f, "formula")?;
        let outcome = prove_classical(a, positive(bound)?);
        let v = match outcome {
            ClassicalOutcome::Proved { .. } => CopylabVerdict::Proved,
            ClassicalOutcome::Refuted { .. } => CopylabVerdict::Refuted,
            ClassicalOutcome::Unknown { .. } => CopylabVerdict::Unknown,
        };
        store(verdict, v, "verdict")?;
        if !cert_json.is_null() {
            store_string(cert_json, to_json(&outcome)?)?;
        }
        Ok(())
    })
}

/// Intuitionistic provability of `f` from no hypotheses; as `copylab_prove_classical`.
///
/// # Safety
/// `f` must be a live handle, `verdict` valid, `cert_json` valid or null.
#[no_mangle]
pub unsafe extern "C" fn copylab_prove_il(
    f: *const CopylabFormula,
    bound: u32,
    verdict: *mut CopylabVerdict,
    cert_json: *mut *mut c_char,
) -> CopylabStatus {
    guard(|| {
        let a = formula(f, "formula")?;
        let outcome = prove_il(&[], a, positive(bound)?);
        let v = match outcome {
            IntuitionisticOutcome::Proved { .. } => CopylabVerdict::Proved,
            IntuitionisticOutcome::Refuted { .. } => CopylabVerdict::Refuted,
            IntuitionisticOutcome::Unknown { .. } => CopylabVerdict::Unknown,
        };
        store(verdict, v, "verdict")?;
        if !cert_json.is_null() {
            store_string(cert_json, to_json(&outcome)?)?;
        }
        Ok(())
    })
}

/// Intuitionistic equivalence of `a` and `b`.
///
/// # Safety
/// `a`, `b` must be live handles and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn copylab_il_equiv(
    a: *const CopylabFormula,
    b: *const CopylabFormula,
    bound: u32,
    out: *mut CopylabEquiv,
) -> CopylabStatus {
    guard(|| {
        let (a, b) = (formula(a, "a")?, formula(b, "b")?);
        let v = match il_equiv(a, b, positive(bound)?) {
            EquivOutcome::Equivalent { .. } => CopylabEquiv::Equivalent,
            EquivOutcome::NotEquivalent { .. } => CopylabEquiv::NotEquivalent,
            EquivOutcome::Unknown { .. } => CopylabEquiv::Unknown,
        };
        store(out, v, "out")
    })
}

/// Distinctness report for `f` (null for the default) as JSON, and whether it passes.
/// `witness` selects the nullary witness atom; null picks one.
///
/// # Safety
/// `f` and `witness` must be live handles or null; `json` and `passed` valid.
#[no_mangle]
pub unsafe extern "C" fn copylab_theorem_json(
    f: *const CopylabFormula,
    witness: *const CopylabFormula,
    bound: u32,
    json: *mut *mut c_char,
    passed: *mut bool,
) -> CopylabStatus {
    guard(|| {
        let bound = positive(bound)?;
        let instance = match f.as_ref() {
            None => TheoremInstanceF::default(),
            Some(h) => TheoremInstanceF::new(h.0.clone()).or_else(|e| fail(CopylabStatus::InvalidArgument, e.to_string()))?,
        };
        let report = match witness.as_ref() {
            None => distinctness_suite(&instance, bound),
            Some(p) => distinctness_suite_with_atom(&instance, &p.0, bound)
                .or_else(|e| fail(CopylabStatus::InvalidArgument, e.to_string()))?,
        };
        store(passed, report.passes(), "passed")?;
        store_string(json, to_json(&report)?)
    })
}

/// Message for the last failed call on this thread, empty after a success.
/// The pointer stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn copylab_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}
