//! C interface to `tropsing`.
//!
//! Every function returns a [`TropsingStatus`]; results go through out-pointers. Objects are opaque
//! handles released by their matching `_free`. Strings returned to the caller are NUL-terminated,
//! owned by the caller and released with [`tropsing_string_free`]. After a non-`Ok` status,
//! [`tropsing_last_error`] describes the failure on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use tropsing::counting::{self, SequenceTriple};
use tropsing::exactlin::rat_to_f64;
use tropsing::gradedcircuits::{self, GradedCircuit};
use tropsing::mgcenum::{self, EnumeratedCircuit};
use tropsing::realsigns;
use tropsing::simplex::SimplexContext;
use tropsing::symweights::WeightFunction;
use tropsing::tropdual;

/// Status codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TropsingStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    OutOfRange = 3,
    ParseError = 4,
    DomainError = 5,
    Panic = 6,
}

/// Lattice points of a simplex.
pub struct TropsingContext(SimplexContext);

/// Result of an enumeration.
pub struct TropsingMgcList(Vec<EnumeratedCircuit>);

/// α, β, γ up to some index.
pub struct TropsingSequences(SequenceTriple);

/// Which sequence to read from a [`TropsingSequences`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TropsingSequence {
    Alpha = 0,
    Beta = 1,
    Gamma = 2,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let s = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = s);
}

fn fail(status: TropsingStatus, msg: impl Into<String>) -> TropsingStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> TropsingStatus) -> TropsingStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => {
            if s == TropsingStatus::Ok {
                set_error("");
            }
            s
        }
        Err(_) => fail(TropsingStatus::Panic, "internal panic"),
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, TropsingStatus> {
    if p.is_null() {
        return Err(fail(TropsingStatus::NullPointer, "null string"));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(TropsingStatus::ParseError, "string is not UTF-8"))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> TropsingStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            TropsingStatus::Ok
        }
        Err(_) => fail(TropsingStatus::InvalidArgument, "interior NUL in output"),
    }
}

macro_rules! nonnull {
    ($($p:expr),+) => {
        if $($p.is_null())||+ {
            return fail(TropsingStatus::NullPointer, "null pointer argument");
        }
    };
}

/// Last error message on this thread, or an empty string. Valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn tropsing_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn tropsing_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be null or come from this library.
#[no_mangle]
pub unsafe extern "C" fn tropsing_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Sizes the worker pool from `TROPSING_THREADS`. Optional; enumeration works without it.
#[no_mangle]
pub extern "C" fn tropsing_configure_threads() {
    mgcenum::configure_threads();
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tropsing_context_new(n: usize, d: i64, out: *mut *mut TropsingContext) -> TropsingStatus {
    nonnull!(out);
    if n == 0 || d < 1 {
        return fail(TropsingStatus::InvalidArgument, "need n ≥ 1 and d ≥ 1");
    }
    guard(|| {
        *out = Box::into_raw(Box::new(TropsingContext(SimplexContext::new(n, d))));
        TropsingStatus::Ok
    })
}

/// # Safety
/// `ctx` must be null or come from [`tropsing_context_new`].
#[no_mangle]
pub unsafe extern "C" fn tropsing_context_free(ctx: *mut TropsingContext) {
    if !ctx.is_null() {
        drop(Box::from_raw(ctx));
    }
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn tropsing_context_len(ctx: *const TropsingContext, out: *mut usize) -> TropsingStatus {
    nonnull!(ctx, out);
    *out = (*ctx).0.len();
    TropsingStatus::Ok
}

/// Copies the `i`-th point in ≺ order into `coords`, which must hold `n + 1` values.
///
/// # Safety
/// `coords` must have room for `n + 1` values.
#[no_mangle]
pub unsafe extern "C" fn tropsing_context_point(ctx: *const TropsingContext, i: usize, coords: *mut i64) -> TropsingStatus {
    nonnull!(ctx, coords);
    let c = &(*ctx).0;
    match c.points.get(i) {
        Some(p) => {
            ptr::copy_nonoverlapping(p.0.as_ptr(), coords, p.0.len());
            TropsingStatus::Ok
        }
        None => fail(TropsingStatus::OutOfRange, format!("point index {i} out of range")),
    }
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn tropsing_enumerate(ctx: *const TropsingContext, out: *mut *mut TropsingMgcList) -> TropsingStatus {
    nonnull!(ctx, out);
    guard(|| {
        let v = mgcenum::enumerate_mgc(&(*ctx).0);
        *out = Box::into_raw(Box::new(TropsingMgcList(v)));
        TropsingStatus::Ok
    })
}

/// # Safety
/// `list` must be null or come from [`tropsing_enumerate`].
#[no_mangle]
pub unsafe extern "C" fn tropsing_mgc_list_free(list: *mut TropsingMgcList) {
    if !list.is_null() {
        drop(Box::from_raw(list));
    }
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn tropsing_mgc_list_len(list: *const TropsingMgcList, out: *mut usize) -> TropsingStatus {
    nonnull!(list, out);
    *out = (*list).0.len();
    TropsingStatus::Ok
}

unsafe fn entry<'a>(list: *const TropsingMgcList, i: usize) -> Result<&'a EnumeratedCircuit, TropsingStatus> {
    (&(*list).0).get(i).ok_or_else(|| fail(TropsingStatus::OutOfRange, format!("circuit index {i} out of range")))
}

/// Multiplicity `m(C)` and first-level multiplicity `m(C₁)` of the `i`-th circuit.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn tropsing_mgc_multiplicity(
    list: *const TropsingMgcList,
    i: usize,
    m: *mut u64,
    m1: *mut u64,
) -> TropsingStatus {
    nonnull!(list, m, m1);
    match entry(list, i) {
        Ok(e) => {
            *m = e.multiplicity();
            *m1 = e.first_level_multiplicity();
            TropsingStatus::Ok
        }
        Err(s) => s,
    }
}

/// Descriptor of the `i`-th circuit, e.g. `IV_2||I`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn tropsing_mgc_descriptor(list: *const TropsingMgcList, i: usize, out: *mut *mut c_char) -> TropsingStatus {
    nonnull!(list, out);
    match entry(list, i) {
        Ok(e) => write_string(out, e.descriptor.to_string()),
        Err(s) => s,
    }
}

/// The `i`-th circuit as JSON `{n,d,center,levels}`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn tropsing_mgc_circuit_json(list: *const TropsingMgcList, i: usize, out: *mut *mut c_char) -> TropsingStatus {
    nonnull!(list, out);
    match entry(list, i) {
        Ok(e) => write_string(out, serde_json::to_string(&e.circuit).expect("serializable")),
        Err(s) => s,
    }
}

/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn tropsing_sequences_new(max_n: usize, out: *mut *mut TropsingSequences) -> TropsingStatus {
    nonnull!(out);
    guard(|| {
        *out = Box::into_raw(Box::new(TropsingSequences(counting::recurrence_sequences(max_n))));
        TropsingStatus::Ok
    })
}

/// # Safety
/// `seq` must be null or come from [`tropsing_sequences_new`].
#[no_mangle]
pub unsafe extern "C" fn tropsing_sequences_free(seq: *mut TropsingSequences) {
    if !seq.is_null() {
        drop(Box::from_raw(seq));
    }
}

unsafe fn seq_value<'a>(seq: *const TropsingSequences, which: TropsingSequence, i: usize) -> Result<&'a tropsing::exactlin::Rational, TropsingStatus> {
    let t: &SequenceTriple = &(*seq).0;
    let v = match which {
        TropsingSequence::Alpha => &t.alpha,
        TropsingSequence::Beta => &t.beta,
        TropsingSequence::Gamma => &t.gamma,
    };
    v.get(i).ok_or_else(|| fail(TropsingStatus::OutOfRange, format!("index {i} beyond max_n")))
}

/// Nearest double to the exact value.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn tropsing_sequences_get(
    seq: *const TropsingSequences,
    which: TropsingSequence,
    i: usize,
    out: *mut f64,
) -> TropsingStatus {
    nonnull!(seq, out);
    match seq_value(seq, which, i) {
        Ok(q) => {
            *out = rat_to_f64(q);
            TropsingStatus::Ok
        }
        Err(s) => s,
    }
}

/// Exact value as `p/q`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn tropsing_sequences_get_exact(
    seq: *const TropsingSequences,
    which: TropsingSequence,
    i: usize,
    out: *mut *mut c_char,
) -> TropsingStatus {
    nonnull!(seq, out);
    match seq_value(seq, which, i) {
        Ok(q) => write_string(out, q.to_string()),
        Err(s) => s,
    }
}

/// δ-nodal count of `Δ_d^(n)` as a decimal integer string.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn tropsing_delta_nodal(n: usize, d: i64, delta: usize, real: bool, out: *mut *mut c_char) -> TropsingStatus {
    nonnull!(out);
    if n == 0 || d < 1 {
        return fail(TropsingStatus::InvalidArgument, "need n ≥ 1 and d ≥ 1");
    }
    guard(|| {
        let r = counting::count_report(&SimplexContext::new(n, d));
        match counting::delta_nodal_count(&r, delta, real) {
            Ok(c) => write_string(out, c.to_string()),
            Err(e) => fail(TropsingStatus::DomainError, format!("{e:?}")),
        }
    })
}

unsafe fn parse<T: serde::de::DeserializeOwned>(json: *const c_char) -> Result<T, TropsingStatus> {
    let s = read_str(json)?;
    serde_json::from_str(s).map_err(|e| fail(TropsingStatus::ParseError, e.to_string()))
}

/// Singularity at the origin for a weight function given as JSON `{n,d,entries}`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn tropsing_is_singular(json: *const c_char, out: *mut bool) -> TropsingStatus {
    nonnull!(out);
    guard(|| match parse::<WeightFunction>(json) {
        Ok(nu) => {
            *out = tropdual::is_singular_at_origin(&nu);
            TropsingStatus::Ok
        }
        Err(s) => s,
    })
}

unsafe fn circuit(json: *const c_char) -> Result<GradedCircuit, TropsingStatus> {
    let c: GradedCircuit = parse(json)?;
    gradedcircuits::validate(&c).map_err(|e| fail(TropsingStatus::DomainError, format!("{e:?}")))
}

/// Mikhalkin condition for a graded circuit given as JSON `{n,d,center,levels}`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn tropsing_admits_mikhalkin(json: *const c_char, out: *mut bool) -> TropsingStatus {
    nonnull!(out);
    guard(|| match circuit(json) {
        Ok(c) => {
            *out = gradedcircuits::admits_mikhalkin(&c);
            TropsingStatus::Ok
        }
        Err(s) => s,
    })
}

/// Exact average of the real count over Ω, as `p/q`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn tropsing_real_average(json: *const c_char, out: *mut *mut c_char) -> TropsingStatus {
    nonnull!(out);
    guard(|| match circuit(json) {
        Ok(c) => {
            let ctx = SimplexContext::new(c.n, c.d);
            match realsigns::average_mt(&c, &ctx) {
                Ok(q) => write_string(out, q.to_string()),
                Err(e) => fail(TropsingStatus::DomainError, format!("{e:?}")),
            }
        }
        Err(s) => s,
    })
}
