//! C ABI over `pcakit`.
//!
//! Conventions:
//!
//! - Every fallible function returns a `PcakitStatus`; `PCAKIT_OK` is 0.
//! - On failure a thread-local message is kept; read it with
//!   [`pcakit_last_error`]. It stays valid until the next call on the same
//!   thread.
//! - Handles are opaque and owned by the caller; free each with its
//!   `_free` function. Strings returned through `out` parameters are freed
//!   with [`pcakit_string_free`].
//! - Input text is UTF-8 and NUL-terminated.
//!
//! The header is `include/pcakit.h`.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use pcakit::arrayprog::{reachable, Program};
use pcakit::classauto::{da_to_pca, eda_to_pca, AnyAutomaton, Pca};
use pcakit::compile::pca_to_pma;
use pcakit::counters::{explore, validate_priority, CounterMachine};
use pcakit::dataword::DataWord;
use pcakit::fsm::ClassDfa;
use pcakit::priority::PriorityReport;
use pcakit::Error;

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PcakitStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Input = 4,
    Unsupported = 5,
    Construction = 6,
    Internal = 7,
}

/// A class condition over `Γ × {0,1}`.
pub struct PcakitCondition(ClassDfa);

/// Any automaton read from the composite file format.
pub struct PcakitAutomaton(AnyAutomaton);

/// An explicit counter machine.
pub struct PcakitMachine(CounterMachine);

/// A parsed array program.
pub struct PcakitProgram(Program);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> PcakitStatus {
    match e {
        Error::Parse { .. } | Error::Type(_) => PcakitStatus::Parse,
        Error::Input(_) => PcakitStatus::Input,
        Error::Unsupported(_) => PcakitStatus::Unsupported,
        Error::Construction(_) => PcakitStatus::Construction,
        Error::Contract(_) => PcakitStatus::Internal,
    }
}

fn fail(status: PcakitStatus, msg: &str) -> PcakitStatus {
    set_error(msg);
    status
}

fn from_error(e: Error) -> PcakitStatus {
    fail(status_of(&e), &e.to_string())
}

/// Runs `f`, turning panics into `Internal`.
fn guard(f: impl FnOnce() -> PcakitStatus) -> PcakitStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(PcakitStatus::Internal, "internal panic"),
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, PcakitStatus> {
    if p.is_null() {
        return Err(fail(PcakitStatus::NullArgument, "null string argument"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(PcakitStatus::InvalidUtf8, "argument is not valid UTF-8"))
}

unsafe fn put_string(out: *mut *mut c_char, s: String) {
    *out = CString::new(s.replace('\0', " ")).unwrap_or_default().into_raw();
}

unsafe fn put_handle<T>(out: *mut *mut T, v: T) {
    *out = Box::into_raw(Box::new(v));
}

macro_rules! try_ffi {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(s) => return s,
        }
    };
}

macro_rules! non_null {
    ($($p:expr),+) => {
        if $($p.is_null())||+ {
            return fail(PcakitStatus::NullArgument, "null pointer argument");
        }
    };
}

/// Message for the last failure on this thread; empty after a success.
#[no_mangle]
pub extern "C" fn pcakit_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version, static storage.
#[no_mangle]
pub extern "C" fn pcakit_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

#[no_mangle]
pub unsafe extern "C" fn pcakit_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

// conditions

#[no_mangle]
pub unsafe extern "C" fn pcakit_condition_parse(src: *const c_char, out: *mut *mut PcakitCondition) -> PcakitStatus {
    guard(|| {
        non_null!(out);
        let t = try_ffi!(text(src));
        match ClassDfa::parse(t) {
            Ok(d) => {
                put_handle(out, PcakitCondition(d));
                PcakitStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn pcakit_condition_free(c: *mut PcakitCondition) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Writes the verdict to `zero_priority` and, if `report` is non-null, the
/// text report (`structured` non-zero for JSON).
#[no_mangle]
pub unsafe extern "C" fn pcakit_condition_check_priority(
    c: *const PcakitCondition,
    structured: i32,
    zero_priority: *mut bool,
    report: *mut *mut c_char,
) -> PcakitStatus {
    guard(|| {
        non_null!(c, zero_priority);
        let r = PriorityReport::build(&(*c).0);
        *zero_priority = r.zero_priority;
        if !report.is_null() {
            let body = if structured != 0 {
                serde_json::to_string_pretty(&r).expect("report serializes")
            } else {
                r.to_text()
            };
            put_string(report, body);
        }
        PcakitStatus::Ok
    })
}

// automata

#[no_mangle]
pub unsafe extern "C" fn pcakit_automaton_parse(src: *const c_char, out: *mut *mut PcakitAutomaton) -> PcakitStatus {
    guard(|| {
        non_null!(out);
        let t = try_ffi!(text(src));
        match AnyAutomaton::parse(t) {
            Ok(a) => {
                put_handle(out, PcakitAutomaton(a));
                PcakitStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn pcakit_automaton_free(a: *mut PcakitAutomaton) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

/// Membership of one data word given as `a:1 b:2 a:1`.
#[no_mangle]
pub unsafe extern "C" fn pcakit_automaton_accepts(
    a: *const PcakitAutomaton,
    word: *const c_char,
    accepted: *mut bool,
) -> PcakitStatus {
    guard(|| {
        non_null!(a, accepted);
        let w = try_ffi!(text(word));
        let dw = match DataWord::parse_line(w, 1) {
            Ok(d) => d,
            Err(e) => return from_error(e),
        };
        match (*a).0.as_language().accepts(&dw) {
            Ok(b) => {
                *accepted = b;
                PcakitStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Compiles to a priority multicounter machine. Class conditions must be
/// 0-priority; otherwise `PCAKIT_CONSTRUCTION`.
#[no_mangle]
pub unsafe extern "C" fn pcakit_automaton_compile(a: *const PcakitAutomaton, out: *mut *mut PcakitMachine) -> PcakitStatus {
    guard(|| {
        non_null!(a, out);
        let pca = match &(*a).0 {
            AnyAutomaton::Pca(p) => Ok(p.clone()),
            AnyAutomaton::Data(d) => Ok(da_to_pca(d)),
            AnyAutomaton::Extended(e) => Ok(eda_to_pca(e)),
            AnyAutomaton::Class(c) => Pca::single(c.transducer().clone(), c.condition().clone(), None),
        };
        match pca.and_then(|p| pca_to_pma(&p)) {
            Ok(pma) => {
                put_handle(out, PcakitMachine(pma.into_machine()));
                PcakitStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

// counter machines

#[no_mangle]
pub unsafe extern "C" fn pcakit_machine_parse(src: *const c_char, out: *mut *mut PcakitMachine) -> PcakitStatus {
    guard(|| {
        non_null!(out);
        let t = try_ffi!(text(src));
        match CounterMachine::parse(t) {
            Ok(m) => {
                put_handle(out, PcakitMachine(m));
                PcakitStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn pcakit_machine_free(m: *mut PcakitMachine) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

#[no_mangle]
pub unsafe extern "C" fn pcakit_machine_counters(m: *const PcakitMachine) -> usize {
    if m.is_null() {
        0
    } else {
        (*m).0.num_counters()
    }
}

/// True iff every zero test is a prefix test.
#[no_mangle]
pub unsafe extern "C" fn pcakit_machine_is_priority(m: *const PcakitMachine) -> bool {
    !m.is_null() && validate_priority(&(*m).0)
}

#[no_mangle]
pub unsafe extern "C" fn pcakit_machine_to_text(m: *const PcakitMachine, out: *mut *mut c_char) -> PcakitStatus {
    guard(|| {
        non_null!(m, out);
        put_string(out, (*m).0.to_text());
        PcakitStatus::Ok
    })
}

/// Bounded exploration. `words` receives the accepted words, one per line
/// with letters separated by spaces; `exact` is false when the sum or step
/// bound cut the search.
#[no_mangle]
pub unsafe extern "C" fn pcakit_machine_explore(
    m: *const PcakitMachine,
    max_len: usize,
    sum_bound: u64,
    steps: usize,
    words: *mut *mut c_char,
    exact: *mut bool,
) -> PcakitStatus {
    guard(|| {
        non_null!(m, words, exact);
        match explore(&(*m).0, max_len, sum_bound, steps) {
            Ok(lang) => {
                let mut s = String::new();
                for (w, _) in &lang.words {
                    s.push_str(&w.join(" "));
                    s.push('\n');
                }
                *exact = lang.is_exact();
                put_string(words, s);
                PcakitStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

// array programs

#[no_mangle]
pub unsafe extern "C" fn pcakit_program_parse(src: *const c_char, out: *mut *mut PcakitProgram) -> PcakitStatus {
    guard(|| {
        non_null!(out);
        let t = try_ffi!(text(src));
        match Program::parse(t) {
            Ok(p) => {
                put_handle(out, PcakitProgram(p));
                PcakitStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn pcakit_program_free(p: *mut PcakitProgram) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Bounded reachability of a full Boolean target such as
/// `b1=true b2=false`. `witness` receives the least array reaching it, or
/// NULL when none of length at most `max_len` does.
#[no_mangle]
pub unsafe extern "C" fn pcakit_program_reachable(
    p: *const PcakitProgram,
    target: *const c_char,
    max_len: usize,
    witness: *mut *mut c_char,
    truncated: *mut bool,
) -> PcakitStatus {
    guard(|| {
        non_null!(p, witness, truncated);
        let prog = &(*p).0;
        let t = try_ffi!(text(target));
        let goal = match prog.parse_target(t) {
            Ok(g) => g,
            Err(e) => return from_error(e),
        };
        if goal.len() != prog.bool_vars().len() {
            return fail(PcakitStatus::Input, "target must assign every Boolean variable");
        }
        match reachable(prog, &goal, max_len) {
            Ok(r) => {
                *truncated = r.truncated;
                match r.witness {
                    Some(w) => put_string(witness, w.to_string()),
                    None => *witness = ptr::null_mut(),
                }
                PcakitStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}
