//! C ABI over `chainforge`.
//!
//! Every fallible call returns a `CfStatus`; on failure the message is kept
//! per thread and can be fetched with `cf_last_error_message`. Strings handed
//! out by this library must be released with `cf_string_free`, tables with
//! `cf_weight_table_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use chainforge::arith::fmt_rational;
use chainforge::chain::{Family, Owner};
use chainforge::grid::layer_size;
use chainforge::lemmas::check_lemma;
use chainforge::oracle::{certify_theorem, Claim, OracleBudget, VerdictStatus};
use chainforge::weights::{
    assign_weights_fast_d1, assign_weights_fast_d2, assign_weights_generic_with, sperner_table,
    verify_induced, GenericOptions, InducedMode, TieOrder, WeightTable,
};
use chainforge::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    OutOfRange = 3,
    Unsupported = 4,
    BudgetExceeded = 5,
    Internal = 6,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CfMethod {
    Generic = 0,
    Fast = 1,
    Sperner = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CfFamily {
    Basic = 0,
    AntiBasic = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CfMode {
    Type = 0,
    Point = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CfClaim {
    Theorem = 0,
    Conjecture = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CfVerdictStatus {
    Pass = 0,
    Fail = 1,
    Incomplete = 2,
}

/// Owner of a chain group: a layer m (d=1) or a type (a, b, c) (d=2).
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CfOwner {
    /// True for a layer, in which case only `a` is set and holds m.
    pub is_layer: bool,
    pub a: u32,
    pub b: u32,
    pub c: u32,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CfVerdict {
    pub status: CfVerdictStatus,
    /// -1 when the oracle did not finish.
    pub mis: i64,
    /// -1 when not enumerated, else 0 or 1.
    pub unique: i32,
    /// -1 when not enumerated.
    pub maximum_sets: i64,
    pub certified: bool,
}

/// Opaque weight table.
pub struct CfWeightTable {
    inner: WeightTable,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> CfStatus {
    match e {
        Error::DimensionMismatch(_)
        | Error::InvalidType { .. }
        | Error::Parse(_)
        | Error::UnknownLemma(_) => CfStatus::InvalidArgument,
        Error::OutOfRange(_) | Error::NotAChain(_) => CfStatus::OutOfRange,
        Error::UnsupportedVariant(_) => CfStatus::Unsupported,
        Error::BudgetExceeded { .. } => CfStatus::BudgetExceeded,
    }
}

/// Runs `f`, recording errors and converting panics.
fn guard(f: impl FnOnce() -> Result<(), (CfStatus, String)>) -> CfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CfStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            CfStatus::Internal
        }
    }
}

fn lib_err(e: Error) -> (CfStatus, String) {
    (status_of(&e), e.to_string())
}

fn null() -> (CfStatus, String) {
    (CfStatus::NullPointer, "null pointer argument".into())
}

fn out_string(s: String, out: *mut *mut c_char) -> Result<(), (CfStatus, String)> {
    let c = CString::new(s).map_err(|e| (CfStatus::Internal, e.to_string()))?;
    // SAFETY: caller checked `out` for null.
    unsafe { *out = c.into_raw() };
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or NULL. Free with
/// `cf_string_free`.
#[no_mangle]
pub extern "C" fn cf_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|e| {
        e.borrow()
            .as_ref()
            .map_or(ptr::null_mut(), |s| s.clone().into_raw())
    })
}

/// # Safety
/// `s` must be NULL or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn cf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a weight table. `method` Sperner ignores `d` and `k`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cf_weight_table_new(
    n: u32,
    d: u32,
    k: u32,
    method: CfMethod,
    family: CfFamily,
    out: *mut *mut CfWeightTable,
) -> CfStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let family = match family {
            CfFamily::Basic => Family::Basic,
            CfFamily::AntiBasic => Family::AntiBasic,
        };
        let table = match method {
            CfMethod::Generic => assign_weights_generic_with(
                n,
                d,
                k,
                GenericOptions {
                    family,
                    tie_order: TieOrder::Canonical,
                },
            ),
            CfMethod::Fast if family != Family::Basic => Err(Error::UnsupportedVariant(
                "fast path covers the basic family only".into(),
            )),
            CfMethod::Fast => match d {
                1 => assign_weights_fast_d1(n, k),
                2 => assign_weights_fast_d2(n, k),
                _ => Err(Error::UnsupportedVariant(format!("no fast path for d={d}"))),
            },
            CfMethod::Sperner => sperner_table(n),
        }
        .map_err(lib_err)?;
        *out = Box::into_raw(Box::new(CfWeightTable { inner: table }));
        Ok(())
    })
}

/// # Safety
/// `table` must be NULL or a handle from `cf_weight_table_new`, freed once.
#[no_mangle]
pub unsafe extern "C" fn cf_weight_table_free(table: *mut CfWeightTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// Number of chain groups in the table.
///
/// # Safety
/// `table` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cf_weight_table_len(
    table: *const CfWeightTable,
    out: *mut usize,
) -> CfStatus {
    guard(|| {
        let t = table.as_ref().ok_or_else(null)?;
        if out.is_null() {
            return Err(null());
        }
        *out = t.inner.len();
        Ok(())
    })
}

/// Owner and weight ("p/q") of entry `index`, in owner order. `weight` may be
/// NULL; otherwise free it with `cf_string_free`.
///
/// # Safety
/// `table` must be a live handle; `owner` valid for writes; `weight` NULL or
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cf_weight_table_entry(
    table: *const CfWeightTable,
    index: usize,
    owner: *mut CfOwner,
    weight: *mut *mut c_char,
) -> CfStatus {
    guard(|| {
        let t = table.as_ref().ok_or_else(null)?;
        if owner.is_null() {
            return Err(null());
        }
        let (o, w) = t.inner.entries().iter().nth(index).ok_or_else(|| {
            (
                CfStatus::OutOfRange,
                format!("entry {index} of {}", t.inner.len()),
            )
        })?;
        *owner = match *o {
            Owner::Layer(m) => CfOwner {
                is_layer: true,
                a: m,
                b: 0,
                c: 0,
            },
            Owner::Type(ty) => CfOwner {
                is_layer: false,
                a: ty.a,
                b: ty.b,
                c: ty.c,
            },
        };
        if !weight.is_null() {
            out_string(fmt_rational(w), weight)?;
        }
        Ok(())
    })
}

/// JSON rendering of the table. Free with `cf_string_free`.
///
/// # Safety
/// `table` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cf_weight_table_to_json(
    table: *const CfWeightTable,
    out: *mut *mut c_char,
) -> CfStatus {
    guard(|| {
        let t = table.as_ref().ok_or_else(null)?;
        if out.is_null() {
            return Err(null());
        }
        out_string(t.inner.to_json().to_string(), out)
    })
}

/// Checks that the table induces weight exactly 1 at every type (or point).
///
/// # Safety
/// `table` must be a live handle and `passed` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cf_weight_table_verify(
    table: *const CfWeightTable,
    mode: CfMode,
    passed: *mut bool,
) -> CfStatus {
    guard(|| {
        let t = table.as_ref().ok_or_else(null)?;
        if passed.is_null() {
            return Err(null());
        }
        let mode = match mode {
            CfMode::Type => InducedMode::Type,
            CfMode::Point => InducedMode::Point,
        };
        *passed = verify_induced(&t.inner, mode).map_err(lib_err)?.passed();
        Ok(())
    })
}

/// Size of layer m of {0..d}^n as a decimal string.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cf_layer_size(n: u32, d: u32, m: u32, out: *mut *mut c_char) -> CfStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        out_string(layer_size(n, d, m).map_err(lib_err)?.to_string(), out)
    })
}

/// Certifies the predicted maximum set against the exact oracle.
/// `max_vertices` 0 keeps the default budget.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cf_certify(
    n: u32,
    d: u32,
    k: u32,
    claim: CfClaim,
    max_vertices: u64,
    out: *mut CfVerdict,
) -> CfStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let mut budget = OracleBudget::default();
        if max_vertices > 0 {
            budget.max_vertices = u128::from(max_vertices);
        }
        let claim = match claim {
            CfClaim::Theorem => Claim::Theorem,
            CfClaim::Conjecture => Claim::Conjecture,
        };
        let v = certify_theorem(n, d, k, claim, &budget).map_err(lib_err)?;
        *out = CfVerdict {
            status: match v.status {
                VerdictStatus::Pass => CfVerdictStatus::Pass,
                VerdictStatus::Fail => CfVerdictStatus::Fail,
                VerdictStatus::Incomplete => CfVerdictStatus::Incomplete,
            },
            mis: v.mis.map_or(-1, |m| m as i64),
            unique: v.unique.map_or(-1, i32::from),
            maximum_sets: v.maximum_sets.map_or(-1, |m| m as i64),
            certified: v.certified,
        };
        Ok(())
    })
}

/// Runs one identity check by name. `failures` may be NULL.
///
/// # Safety
/// `name` must be a NUL-terminated string; `passed` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cf_check_lemma(
    name: *const c_char,
    n: u32,
    k: u32,
    passed: *mut bool,
    failures: *mut u64,
) -> CfStatus {
    guard(|| {
        if name.is_null() || passed.is_null() {
            return Err(null());
        }
        let name = CStr::from_ptr(name)
            .to_str()
            .map_err(|e| (CfStatus::InvalidArgument, e.to_string()))?;
        let lemma = name.parse().map_err(lib_err)?;
        let r = check_lemma(lemma, n, k).map_err(lib_err)?;
        *passed = r.passed();
        if !failures.is_null() {
            *failures = r.failures;
        }
        Ok(())
    })
}
