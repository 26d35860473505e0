//! C ABI for `schur_rings`.
//!
//! Every function returns a [`SchurStatus`] and writes results through out
//! pointers. Strings handed out are owned by the caller and released with
//! [`schur_string_free`]; handles are released with their own `_free`
//! function. After a non-OK status, [`schur_last_error`] describes it.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use schur_rings::algebra::{BigInt, IntPolynomial};
use schur_rings::counting::{omega_odd, omega_odd_eval, omega_two, PrimeSpec};
use schur_rings::enumerate::{enumerate_bruteforce, enumerate_modulus, EnumError, EnumOptions, EnumerationResult};
use schur_rings::genfun::{verify_gf_odd, verify_gf_two};
use schur_rings::schur::{is_schur_ring, GroupPartition};

/// Result code of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchurStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NotPrimePower = 3,
    BoundExceeded = 4,
    BudgetExhausted = 5,
    /// The value does not fit the requested fixed-width type.
    Overflow = 6,
    ParseError = 7,
    IndexOutOfRange = 8,
    /// A bug on the library side, including caught panics.
    Internal = 9,
}

/// A polynomial in `x`, the number of divisors of `p - 1`.
pub struct SchurPolynomial(IntPolynomial);

/// The rings found by one enumeration run.
pub struct SchurEnumeration(EnumerationResult);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("interior nuls removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

type Res<T> = Result<T, (SchurStatus, String)>;

fn err<T>(status: SchurStatus, msg: impl Into<String>) -> Res<T> {
    Err((status, msg.into()))
}

/// Runs `f`, converting errors and panics into a status.
fn guard(f: impl FnOnce() -> Res<()>) -> SchurStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            SchurStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal error: {msg}"));
            SchurStatus::Internal
        }
    }
}

fn out_ref<'a, T>(p: *mut T, name: &str) -> Res<&'a mut T> {
    // SAFETY: the caller passes either null or a valid, writable pointer.
    unsafe { p.as_mut() }.ok_or((SchurStatus::NullPointer, format!("{name} is null")))
}

fn in_ref<'a, T>(p: *const T, name: &str) -> Res<&'a T> {
    // SAFETY: the caller passes either null or a pointer from this library.
    unsafe { p.as_ref() }.ok_or((SchurStatus::NullPointer, format!("{name} is null")))
}

fn in_str<'a>(p: *const c_char, name: &str) -> Res<&'a str> {
    if p.is_null() {
        return err(SchurStatus::NullPointer, format!("{name} is null"));
    }
    // SAFETY: non-null and, per the contract, nul-terminated.
    unsafe { CStr::from_ptr(p) }
        .to_str()
        .map_err(|_| (SchurStatus::InvalidArgument, format!("{name} is not UTF-8")))
}

fn give_string(s: String) -> *mut c_char {
    CString::new(s).expect("no interior nul").into_raw()
}

fn to_u64(v: &BigInt) -> Res<u64> {
    u64::try_from(v).map_err(|_| (SchurStatus::Overflow, format!("{v} does not fit in 64 bits")))
}

fn enum_error(e: EnumError) -> (SchurStatus, String) {
    let status = match e {
        EnumError::NotPrimePower(_) => SchurStatus::NotPrimePower,
        EnumError::BoundExceeded { .. } => SchurStatus::BoundExceeded,
        EnumError::BudgetExhausted { .. } => SchurStatus::BudgetExhausted,
        EnumError::AxiomFailure { .. } => SchurStatus::Internal,
        _ => SchurStatus::InvalidArgument,
    };
    (status, e.to_string())
}

fn odd_count(p: u64, n: usize) -> Res<BigInt> {
    if p == 2 {
        return err(SchurStatus::InvalidArgument, "use schur_count_two for p = 2");
    }
    let spec = PrimeSpec::new(p, n).map_err(|e| (SchurStatus::InvalidArgument, e.to_string()))?;
    omega_odd_eval(&spec).map_err(|e| (SchurStatus::InvalidArgument, e.to_string()))
}

/// Message for the last non-OK status on this thread; empty after success.
/// Valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn schur_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn schur_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Number of Schur rings over `Z_{p^n}` for odd prime `p`, as a decimal string.
#[no_mangle]
pub extern "C" fn schur_count_odd(p: u64, n: u32, out: *mut *mut c_char) -> SchurStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = give_string(odd_count(p, n as usize)?.to_string());
        Ok(())
    })
}

/// As [`schur_count_odd`]; `Overflow` when the count exceeds 64 bits.
#[no_mangle]
pub extern "C" fn schur_count_odd_u64(p: u64, n: u32, out: *mut u64) -> SchurStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = to_u64(&odd_count(p, n as usize)?)?;
        Ok(())
    })
}

/// Number of Schur rings over `Z_{2^n}`, as a decimal string.
#[no_mangle]
pub extern "C" fn schur_count_two(n: u32, out: *mut *mut c_char) -> SchurStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = give_string(omega_two(n as usize).to_string());
        Ok(())
    })
}

#[no_mangle]
pub extern "C" fn schur_count_two_u64(n: u32, out: *mut u64) -> SchurStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = to_u64(&omega_two(n as usize))?;
        Ok(())
    })
}

/// `Omega(n)` for odd `p`.
#[no_mangle]
pub extern "C" fn schur_omega_odd(n: u32, out: *mut *mut SchurPolynomial) -> SchurStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = Box::into_raw(Box::new(SchurPolynomial(omega_odd(n as usize))));
        Ok(())
    })
}

/// Degree; `-1` for the zero polynomial.
#[no_mangle]
pub extern "C" fn schur_poly_degree(poly: *const SchurPolynomial, out: *mut i64) -> SchurStatus {
    guard(|| {
        let poly = in_ref(poly, "poly")?;
        *out_ref(out, "out")? = poly.0.degree().map_or(-1, |d| d as i64);
        Ok(())
    })
}

/// Coefficient of `x^i` as a decimal string.
#[no_mangle]
pub extern "C" fn schur_poly_coeff(poly: *const SchurPolynomial, i: u32, out: *mut *mut c_char) -> SchurStatus {
    guard(|| {
        let poly = in_ref(poly, "poly")?;
        *out_ref(out, "out")? = give_string(poly.0.coeff(i as usize).to_string());
        Ok(())
    })
}

/// Canonical text, e.g. `x^2+2x+1`.
#[no_mangle]
pub extern "C" fn schur_poly_to_string(poly: *const SchurPolynomial, out: *mut *mut c_char) -> SchurStatus {
    guard(|| {
        let poly = in_ref(poly, "poly")?;
        *out_ref(out, "out")? = give_string(poly.0.to_string());
        Ok(())
    })
}

#[no_mangle]
pub extern "C" fn schur_poly_eval_u64(poly: *const SchurPolynomial, x: u64, out: *mut u64) -> SchurStatus {
    guard(|| {
        let poly = in_ref(poly, "poly")?;
        *out_ref(out, "out")? = to_u64(&poly.0.eval(&BigInt::from(x)))?;
        Ok(())
    })
}

/// # Safety
/// `poly` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn schur_poly_free(poly: *mut SchurPolynomial) {
    if !poly.is_null() {
        drop(Box::from_raw(poly));
    }
}

/// Constructive enumeration over `Z_m`, `m` a prime power no larger than
/// `bound`. `jobs = 0` uses the default thread pool.
#[no_mangle]
pub extern "C" fn schur_enumerate(modulus: u64, bound: u64, jobs: u32, out: *mut *mut SchurEnumeration) -> SchurStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        if modulus == 0 {
            return err(SchurStatus::InvalidArgument, "modulus must be positive");
        }
        let opts = EnumOptions {
            bound,
            jobs: (jobs > 0).then_some(jobs as usize),
        };
        let r = enumerate_modulus(modulus, &opts).map_err(enum_error)?;
        *out = Box::into_raw(Box::new(SchurEnumeration(r)));
        Ok(())
    })
}

/// Exhaustive search over `Z_m` visiting at most `budget` states.
#[no_mangle]
pub extern "C" fn schur_enumerate_bruteforce(
    modulus: u64,
    budget: u64,
    out: *mut *mut SchurEnumeration,
) -> SchurStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        if modulus == 0 {
            return err(SchurStatus::InvalidArgument, "modulus must be positive");
        }
        let r = enumerate_bruteforce(modulus, budget).map_err(enum_error)?;
        *out = Box::into_raw(Box::new(SchurEnumeration(r)));
        Ok(())
    })
}

#[no_mangle]
pub extern "C" fn schur_enumeration_count(e: *const SchurEnumeration, out: *mut usize) -> SchurStatus {
    guard(|| {
        let e = in_ref(e, "enumeration")?;
        *out_ref(out, "out")? = e.0.count();
        Ok(())
    })
}

/// Ring `index` in canonical order as `{"modulus", "blocks", "omega_image"}`.
#[no_mangle]
pub extern "C" fn schur_enumeration_ring_json(
    e: *const SchurEnumeration,
    index: usize,
    out: *mut *mut c_char,
) -> SchurStatus {
    guard(|| {
        let e = in_ref(e, "enumeration")?;
        let out = out_ref(out, "out")?;
        let dump = e.0.dump();
        let Some(item) = dump.get(index) else {
            return err(
                SchurStatus::IndexOutOfRange,
                format!("index {index} of {}", e.0.count()),
            );
        };
        *out = give_string(item.to_string());
        Ok(())
    })
}

/// Every ring as one JSON array.
#[no_mangle]
pub extern "C" fn schur_enumeration_dump_json(e: *const SchurEnumeration, out: *mut *mut c_char) -> SchurStatus {
    guard(|| {
        let e = in_ref(e, "enumeration")?;
        *out_ref(out, "out")? = give_string(e.0.dump().to_string());
        Ok(())
    })
}

/// # Safety
/// `e` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn schur_enumeration_free(e: *mut SchurEnumeration) {
    if !e.is_null() {
        drop(Box::from_raw(e));
    }
}

/// Checks `{"modulus": n, "blocks": [[...], ...]}`. On `Ok`, `is_schur` is
/// 1 or 0; when it is 0 and `violation` is non-null, a JSON description of
/// the failed condition is written there.
#[no_mangle]
pub extern "C" fn schur_check_partition_json(
    json: *const c_char,
    is_schur: *mut i32,
    violation: *mut *mut c_char,
) -> SchurStatus {
    guard(|| {
        let text = in_str(json, "json")?;
        let is_schur = out_ref(is_schur, "is_schur")?;
        let p: GroupPartition = serde_json::from_str(text).map_err(|e| (SchurStatus::ParseError, e.to_string()))?;
        match is_schur_ring(&p) {
            Ok(()) => *is_schur = 1,
            Err(v) => {
                *is_schur = 0;
                if let Ok(slot) = out_ref(violation, "violation") {
                    *slot = give_string(serde_json::to_string(&v).expect("violation serializes"));
                }
            }
        }
        Ok(())
    })
}

/// Checks the generating-function identity through `z^order`; `two` selects
/// `p = 2`. `ok` receives 1 or 0.
#[no_mangle]
pub extern "C" fn schur_verify_gf(two: i32, order: usize, ok: *mut i32) -> SchurStatus {
    guard(|| {
        let ok = out_ref(ok, "ok")?;
        if order == 0 {
            return err(SchurStatus::InvalidArgument, "order must be positive");
        }
        let r = if two != 0 {
            verify_gf_two(order)
        } else {
            verify_gf_odd(order)
        };
        *ok = r.ok as i32;
        Ok(())
    })
}
