//! C interface to the `trinom` library.
//!
//! Every function returns a [`TrinomStatus`]. On failure a message is kept per
//! thread and can be read with [`trinom_last_error`]. Strings going out are
//! written NUL-terminated into caller buffers; when the buffer is too small the
//! call returns `TRINOM_STATUS_BUFFER_TOO_SMALL` and stores the required size
//! (including the NUL) in `*needed`.
//!
//! Handles are opaque and must be released with the matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_bigint::BigUint;
use trinom::ait::{ait, search_ait, AitConfig};
use trinom::apt::{apt, search_apt, table_row_mismatches, FactorTable};
use trinom::implicit::{RingContext, RingElement};
use trinom::record::read_jsonl;
use trinom::{DensePoly, Error};

/// Result codes. Zero is success.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrinomStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    MissingFactorization = 4,
    CertificationFailed = 5,
    BufferTooSmall = 6,
    Internal = 7,
}

/// Which property a search or test checks.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrinomMode {
    /// Irreducible factor of degree `r`.
    Ait = 0,
    /// Primitive factor of degree `r`.
    Apt = 1,
}

/// Table of factorizations of `2^r - 1`.
pub struct TrinomFactorTable(FactorTable);

/// A certified ring `GF(2)[x]/(T)` with `T = x^(r+δ) + x^s + 1`.
pub struct TrinomRing {
    ctx: RingContext,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).expect("NUL bytes were replaced"));
}

fn status_of(err: &Error) -> TrinomStatus {
    match err {
        Error::PolyParse { .. } | Error::FactorTableParse { .. } => TrinomStatus::Parse,
        Error::MissingFactorization(_) | Error::FactoringCutoff { .. } | Error::FactorProductMismatch { .. } => {
            TrinomStatus::MissingFactorization
        }
        Error::CertificationFailed { .. } => TrinomStatus::CertificationFailed,
        _ => TrinomStatus::InvalidArgument,
    }
}

struct Failure(TrinomStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

type FfiResult = std::result::Result<(), Failure>;

fn guard(f: impl FnOnce() -> FfiResult) -> TrinomStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            TrinomStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            TrinomStatus::Internal
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(TrinomStatus::NullPointer, format!("{what} is NULL"))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> std::result::Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure(TrinomStatus::Parse, format!("{what} is not UTF-8")))
}

unsafe fn out_arg<'a, T>(p: *mut T, what: &str) -> std::result::Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn table_arg<'a>(p: *const TrinomFactorTable) -> &'a FactorTable {
    match p.as_ref() {
        Some(t) => &t.0,
        None => FactorTable::bundled(),
    }
}

unsafe fn write_str(text: &str, buf: *mut c_char, len: usize, needed: *mut usize) -> FfiResult {
    let want = text.len() + 1;
    if let Some(n) = needed.as_mut() {
        *n = want;
    }
    if buf.is_null() || len < want {
        return Err(Failure(TrinomStatus::BufferTooSmall, format!("need {want} bytes")));
    }
    ptr::copy_nonoverlapping(text.as_ptr(), buf as *mut u8, text.len());
    *buf.add(text.len()) = 0;
    Ok(())
}

fn parse_hex(text: &str) -> std::result::Result<DensePoly, Failure> {
    Ok(DensePoly::from_hex(text)?)
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn trinom_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn trinom_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// The built-in factor table (copied into a new handle).
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn trinom_factor_table_bundled(out: *mut *mut TrinomFactorTable) -> TrinomStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = Box::into_raw(Box::new(TrinomFactorTable(FactorTable::bundled().clone())));
        Ok(())
    })
}

/// Parses a factor table in the text format and merges it over the built-in one.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn trinom_factor_table_parse(
    text: *const c_char,
    out: *mut *mut TrinomFactorTable,
) -> TrinomStatus {
    guard(|| {
        let text = str_arg(text, "text")?;
        let out = out_arg(out, "out")?;
        let extra = FactorTable::parse(text)?;
        let mut table = FactorTable::bundled().clone();
        table.merge(&extra);
        *out = Box::into_raw(Box::new(TrinomFactorTable(table)));
        Ok(())
    })
}

/// # Safety
/// `table` must come from a `trinom_factor_table_*` constructor, or be NULL.
#[no_mangle]
pub unsafe extern "C" fn trinom_factor_table_free(table: *mut TrinomFactorTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// Tests whether `x^(r+delta) + x^s + 1` has an irreducible (mode AIT) or
/// primitive (mode APT) factor of degree `r`. A NULL table means the built-in one.
///
/// # Safety
/// `table` must be a live handle or NULL; `accepted` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn trinom_test(
    r: u64,
    s: u64,
    delta: u64,
    mode: TrinomMode,
    table: *const TrinomFactorTable,
    accepted: *mut bool,
) -> TrinomStatus {
    guard(|| {
        let accepted = out_arg(accepted, "accepted")?;
        let cfg = AitConfig::default();
        *accepted = match mode {
            TrinomMode::Ait => ait(r, s, delta, &cfg)?.accepted,
            TrinomMode::Apt => apt(r, s, delta, table_arg(table), &cfg)?.accepted,
        };
        Ok(())
    })
}

/// All accepted `s <= n/2` at fixed `(r, delta)`, ascending. `*count` receives the
/// number found; at most `cap` values are written to `out`.
///
/// # Safety
/// `out` must have room for `cap` values (it may be NULL when `cap` is 0);
/// `count` must be a valid pointer; `table` a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn trinom_search(
    r: u64,
    delta: u64,
    mode: TrinomMode,
    table: *const TrinomFactorTable,
    out: *mut u64,
    cap: usize,
    count: *mut usize,
) -> TrinomStatus {
    guard(|| {
        let count = out_arg(count, "count")?;
        let cfg = AitConfig::default();
        let records = match mode {
            TrinomMode::Ait => search_ait(r, delta, &cfg)?,
            TrinomMode::Apt => search_apt(r, delta, table_arg(table), &cfg)?,
        };
        let found: Vec<u64> = records.iter().filter(|rec| rec.accepted).map(|rec| rec.s).collect();
        *count = found.len();
        if found.len() > cap || (out.is_null() && !found.is_empty()) {
            return Err(Failure(TrinomStatus::BufferTooSmall, format!("need room for {} values", found.len())));
        }
        if !found.is_empty() {
            ptr::copy_nonoverlapping(found.as_ptr(), out, found.len());
        }
        Ok(())
    })
}

/// Re-checks JSON-lines table rows. `*mismatched` receives the number of rows
/// whose stored result is not reproduced.
///
/// # Safety
/// `jsonl` must be a NUL-terminated string; `mismatched` a valid pointer;
/// `table` a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn trinom_verify_rows(
    jsonl: *const c_char,
    table: *const TrinomFactorTable,
    mismatched: *mut usize,
) -> TrinomStatus {
    guard(|| {
        let text = str_arg(jsonl, "jsonl")?;
        let mismatched = out_arg(mismatched, "mismatched")?;
        let rows = read_jsonl(text.as_bytes()).map_err(|e| Failure(TrinomStatus::Parse, e.to_string()))?;
        let table = table_arg(table);
        let mut bad = 0;
        for row in &rows {
            if !table_row_mismatches(row, table)?.is_empty() {
                bad += 1;
            }
        }
        *mismatched = bad;
        Ok(())
    })
}

/// Builds a ring context; fails with `TRINOM_STATUS_CERTIFICATION_FAILED` unless the
/// trinomial has an irreducible factor of degree `r`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn trinom_ring_new(r: u64, s: u64, delta: u64, out: *mut *mut TrinomRing) -> TrinomStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let ctx = RingContext::new(r, s, delta)?;
        *out = Box::into_raw(Box::new(TrinomRing { ctx }));
        Ok(())
    })
}

/// # Safety
/// `ring` must come from [`trinom_ring_new`], or be NULL.
#[no_mangle]
pub unsafe extern "C" fn trinom_ring_free(ring: *mut TrinomRing) {
    if !ring.is_null() {
        drop(Box::from_raw(ring));
    }
}

/// Binary ring operations on hex-encoded elements.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrinomRingOp {
    Add = 0,
    Mul = 1,
}

unsafe fn ring_arg<'a>(ring: *const TrinomRing) -> std::result::Result<&'a RingContext, Failure> {
    ring.as_ref().map(|r| &r.ctx).ok_or_else(|| null("ring"))
}

unsafe fn element(ctx: &RingContext, hex: *const c_char, what: &str) -> std::result::Result<RingElement, Failure> {
    Ok(ctx.element(&parse_hex(str_arg(hex, what)?)?))
}

/// `a op b` in the ring, written as hex.
///
/// # Safety
/// `a` and `b` must be NUL-terminated; `buf` must have `len` bytes; `needed`
/// may be NULL.
#[no_mangle]
pub unsafe extern "C" fn trinom_ring_op(
    ring: *const TrinomRing,
    op: TrinomRingOp,
    a: *const c_char,
    b: *const c_char,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> TrinomStatus {
    guard(|| {
        let ctx = ring_arg(ring)?;
        let (a, b) = (element(ctx, a, "a")?, element(ctx, b, "b")?);
        let c = match op {
            TrinomRingOp::Add => ctx.add(&a, &b)?,
            TrinomRingOp::Mul => ctx.ring_mul(&a, &b)?,
        };
        write_str(&c.value().to_hex(), buf, len, needed)
    })
}

/// Canonical representative of `a` in the field `GF(2^r)`, as hex.
///
/// # Safety
/// As for [`trinom_ring_op`].
#[no_mangle]
pub unsafe extern "C" fn trinom_ring_canonicalize(
    ring: *const TrinomRing,
    a: *const c_char,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> TrinomStatus {
    guard(|| {
        let ctx = ring_arg(ring)?;
        let c = ctx.canonicalize(&element(ctx, a, "a")?)?;
        write_str(&c.value().to_hex(), buf, len, needed)
    })
}

/// Whether `a` and `b` map to the same field element.
///
/// # Safety
/// `a` and `b` must be NUL-terminated; `equal` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn trinom_ring_field_equal(
    ring: *const TrinomRing,
    a: *const c_char,
    b: *const c_char,
    equal: *mut bool,
) -> TrinomStatus {
    guard(|| {
        let ctx = ring_arg(ring)?;
        let equal = out_arg(equal, "equal")?;
        *equal = ctx.field_equal(&element(ctx, a, "a")?, &element(ctx, b, "b")?)?;
        Ok(())
    })
}

/// `a^e` for a decimal exponent `e`, as hex.
///
/// # Safety
/// As for [`trinom_ring_op`].
#[no_mangle]
pub unsafe extern "C" fn trinom_ring_pow(
    ring: *const TrinomRing,
    a: *const c_char,
    e: *const c_char,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> TrinomStatus {
    guard(|| {
        let ctx = ring_arg(ring)?;
        let a = element(ctx, a, "a")?;
        let e_text = str_arg(e, "e")?;
        let e: BigUint =
            e_text.parse().map_err(|_| Failure(TrinomStatus::Parse, format!("bad decimal exponent {e_text:?}")))?;
        write_str(&ctx.pow(&a, &e)?.value().to_hex(), buf, len, needed)
    })
}

/// Order of `x` in the ring (the period of the trinomial), as decimal.
///
/// # Safety
/// `table` must be a live handle or NULL; `buf` must have `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn trinom_ring_order_of_x(
    ring: *const TrinomRing,
    table: *const TrinomFactorTable,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> TrinomStatus {
    guard(|| {
        let ctx = ring_arg(ring)?;
        let rho = ctx.ring_order_of_x(table_arg(table))?;
        write_str(&rho.to_string(), buf, len, needed)
    })
}
