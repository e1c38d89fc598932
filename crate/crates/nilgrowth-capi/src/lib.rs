//! C ABI for the nilgrowth library.
//!
//! Conventions, mirrored in `include/nilgrowth.h`:
//!
//! - Handles (`NgGroup`, `NgTable`) are opaque; create with `ng_*_new`-style
//!   constructors, release with the matching `ng_*_free`.
//! - Functions return `NG_OK` (0) or a negative `NG_ERR_*` code; constructors
//!   return NULL on failure. The last failure message is available from
//!   `ng_last_error` (caller frees with `ng_string_free`).
//! - Every returned `char*` is a NUL-terminated UTF-8 string allocated by
//!   this library; free it with `ng_string_free`.
//!
//! The header is maintained by hand and checked against the exported symbol
//! list by a test.

use nilgrowth::criterion::{classify, report_json};
use nilgrowth::engine::{bfs_ball, load_table, save_table, BfsOptions, NormTable};
use nilgrowth::group::{lookup, GroupDescriptor};
use nilgrowth::rat::fmt_rat;
use nilgrowth::word::{evaluate, parse_word, GenSet};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

pub const NG_OK: i32 = 0;
/// A handle or required pointer argument was NULL.
pub const NG_ERR_NULL: i32 = -1;
/// Invalid argument (unknown group, malformed word, bad parameter).
pub const NG_ERR_INVALID: i32 = -2;
/// The query needs a larger table radius.
pub const NG_ERR_OUT_OF_RADIUS: i32 = -3;
/// Resource failure (memory budget, I/O).
pub const NG_ERR_RESOURCE: i32 = -4;
/// Domain failure (corrupt file, fingerprint mismatch, degenerate input).
pub const NG_ERR_DOMAIN: i32 = -5;
/// A panic was caught at the boundary; state is unspecified but memory-safe.
pub const NG_ERR_PANIC: i32 = -6;

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into();
    let c = CString::new(msg).unwrap_or_else(|_| CString::new("invalid error text").unwrap());
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

/// Opaque group handle: a registry descriptor plus its canonical letters.
pub struct NgGroup {
    desc: &'static GroupDescriptor,
    gens: GenSet,
}

/// Opaque norm-table handle, tied to the group it was built for.
pub struct NgTable {
    table: NormTable,
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s)
        .map(CString::into_raw)
        .unwrap_or(ptr::null_mut())
}

/// # Safety
/// `ptr` must be NULL or a valid NUL-terminated string for the duration of
/// the call.
unsafe fn cstr<'a>(ptr: *const c_char) -> Option<&'a str> {
    if ptr.is_null() {
        return None;
    }
    unsafe { CStr::from_ptr(ptr) }.to_str().ok()
}

fn guarded<T>(default: T, f: impl FnOnce() -> T) -> T {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(v) => v,
        Err(_) => {
            set_error("internal panic");
            default
        }
    }
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn ng_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Latest error message for this thread, or NULL. Caller frees.
#[no_mangle]
pub extern "C" fn ng_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| match &*e.borrow() {
        Some(c) => c.clone().into_raw(),
        None => ptr::null_mut(),
    })
}

/// Free a string returned by this library. NULL is a no-op.
///
/// # Safety
/// `s` must be a pointer previously returned by this library and not yet
/// freed.
#[no_mangle]
pub unsafe extern "C" fn ng_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Look up a built-in group (Z1, Z2, H3, Engel, vZ, vH, vE, G2rot).
/// Returns NULL and sets the error on an unknown name.
///
/// # Safety
/// `name` must be a valid NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn ng_group_new(name: *const c_char) -> *mut NgGroup {
    guarded(ptr::null_mut(), || {
        clear_error();
        let Some(name) = (unsafe { cstr(name) }) else {
            set_error("name is NULL or not UTF-8");
            return ptr::null_mut();
        };
        match lookup(name) {
            Some(desc) => Box::into_raw(Box::new(NgGroup {
                desc,
                gens: GenSet::default_for(desc),
            })),
            None => {
                set_error(format!("unknown group `{name}`"));
                ptr::null_mut()
            }
        }
    })
}

/// # Safety
/// `g` must be NULL or a pointer from `ng_group_new`, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ng_group_free(g: *mut NgGroup) {
    if !g.is_null() {
        drop(unsafe { Box::from_raw(g) });
    }
}

/// Nilpotency class of the kernel; 0 on NULL.
///
/// # Safety
/// `g` must be NULL or a live `NgGroup`.
#[no_mangle]
pub unsafe extern "C" fn ng_group_class(g: *const NgGroup) -> u32 {
    match unsafe { g.as_ref() } {
        Some(g) => g.desc.class_s(),
        None => 0,
    }
}

/// Bass-Guivarc'h exponent of the kernel; 0 on NULL.
///
/// # Safety
/// `g` must be NULL or a live `NgGroup`.
#[no_mangle]
pub unsafe extern "C" fn ng_group_bass_guivarch(g: *const NgGroup) -> u64 {
    match unsafe { g.as_ref() } {
        Some(g) => g.desc.bass_guivarch(),
        None => 0,
    }
}

/// Growth classification report as JSON (same shape as `criterion --json`).
/// Returns NULL and sets the error on failure.
///
/// # Safety
/// `g` must be NULL or a live `NgGroup`.
#[no_mangle]
pub unsafe extern "C" fn ng_criterion_json(g: *const NgGroup) -> *mut c_char {
    guarded(ptr::null_mut(), || {
        clear_error();
        let Some(g) = (unsafe { g.as_ref() }) else {
            set_error("group handle is NULL");
            return ptr::null_mut();
        };
        match classify(g.desc, &g.gens) {
            Ok(report) => to_c_string(report_json(&report, &g.gens).to_string()),
            Err(e) => {
                set_error(e.to_string());
                ptr::null_mut()
            }
        }
    })
}

/// Evaluate a word and render the element's exact coordinates.
/// Returns NULL and sets the error on failure.
///
/// # Safety
/// `g` must be NULL or a live `NgGroup`; `word` NULL or NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn ng_eval(g: *const NgGroup, word: *const c_char) -> *mut c_char {
    guarded(ptr::null_mut(), || {
        clear_error();
        let Some(g) = (unsafe { g.as_ref() }) else {
            set_error("group handle is NULL");
            return ptr::null_mut();
        };
        let Some(text) = (unsafe { cstr(word) }) else {
            set_error("word is NULL or not UTF-8");
            return ptr::null_mut();
        };
        let parsed = match parse_word(text, &g.gens) {
            Ok(w) => w,
            Err(e) => {
                set_error(e.to_string());
                return ptr::null_mut();
            }
        };
        match evaluate(&parsed, &g.gens, g.desc) {
            Ok(elem) => to_c_string(g.desc.display_element(&elem)),
            Err(e) => {
                set_error(e.to_string());
                ptr::null_mut()
            }
        }
    })
}

/// Exact `alpha_s` as a rational string; NULL when `s < 2`.
#[no_mangle]
pub extern "C" fn ng_alpha(s: u32) -> *mut c_char {
    guarded(ptr::null_mut(), || {
        clear_error();
        if s < 2 {
            set_error("alpha requires s >= 2");
            return ptr::null_mut();
        }
        to_c_string(fmt_rat(&nilgrowth::criterion::alpha(s)))
    })
}

/// Exact `delta_s` as a rational string; NULL when `s < 1`.
#[no_mangle]
pub extern "C" fn ng_delta(s: u32) -> *mut c_char {
    guarded(ptr::null_mut(), || {
        clear_error();
        if s < 1 {
            set_error("delta requires s >= 1");
            return ptr::null_mut();
        }
        to_c_string(fmt_rat(&nilgrowth::criterion::delta(s)))
    })
}

/// Build a norm table by exhaustive search. `workers = 0` means 1.
/// Returns NULL and sets the error on failure.
///
/// # Safety
/// `g` must be NULL or a live `NgGroup`.
#[no_mangle]
pub unsafe extern "C" fn ng_ball(
    g: *const NgGroup,
    radius: u32,
    max_elements: u64,
    workers: u32,
) -> *mut NgTable {
    guarded(ptr::null_mut(), || {
        clear_error();
        let Some(g) = (unsafe { g.as_ref() }) else {
            set_error("group handle is NULL");
            return ptr::null_mut();
        };
        let opts = BfsOptions {
            max_elements: max_elements as usize,
            workers: workers.max(1) as usize,
        };
        match bfs_ball(g.desc, &g.gens, radius, &opts) {
            Ok(table) => Box::into_raw(Box::new(NgTable { table })),
            Err(e) => {
                set_error(e.to_string());
                ptr::null_mut()
            }
        }
    })
}

/// # Safety
/// `t` must be NULL or a pointer from `ng_ball`/`ng_table_load`, not freed.
#[no_mangle]
pub unsafe extern "C" fn ng_table_free(t: *mut NgTable) {
    if !t.is_null() {
        drop(unsafe { Box::from_raw(t) });
    }
}

/// # Safety
/// `t` must be NULL or a live `NgTable`.
#[no_mangle]
pub unsafe extern "C" fn ng_table_radius(t: *const NgTable) -> u32 {
    match unsafe { t.as_ref() } {
        Some(t) => t.table.radius(),
        None => 0,
    }
}

/// Number of elements first reached at distance `n`; 0 when out of range.
///
/// # Safety
/// `t` must be NULL or a live `NgTable`.
#[no_mangle]
pub unsafe extern "C" fn ng_table_layer_size(t: *const NgTable, n: u32) -> u64 {
    match unsafe { t.as_ref() } {
        Some(t) => t
            .table
            .layers()
            .get(n as usize)
            .map_or(0, |l| l.len() as u64),
        None => 0,
    }
}

/// Norm of a word's element. Writes to `out_norm` and returns `NG_OK`, or
/// returns `NG_ERR_OUT_OF_RADIUS` when the element lies outside the table.
///
/// # Safety
/// Handles must be NULL or live; `word` NULL or NUL-terminated; `out_norm`
/// NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn ng_word_norm(
    t: *const NgTable,
    g: *const NgGroup,
    word: *const c_char,
    out_norm: *mut u32,
) -> i32 {
    guarded(NG_ERR_PANIC, || {
        clear_error();
        let (Some(t), Some(g)) = (unsafe { t.as_ref() }, unsafe { g.as_ref() }) else {
            set_error("handle is NULL");
            return NG_ERR_NULL;
        };
        if out_norm.is_null() {
            set_error("out_norm is NULL");
            return NG_ERR_NULL;
        }
        let Some(text) = (unsafe { cstr(word) }) else {
            set_error("word is NULL or not UTF-8");
            return NG_ERR_NULL;
        };
        let parsed = match parse_word(text, &g.gens) {
            Ok(w) => w,
            Err(e) => {
                set_error(e.to_string());
                return NG_ERR_INVALID;
            }
        };
        let elem = match evaluate(&parsed, &g.gens, g.desc) {
            Ok(e) => e,
            Err(e) => {
                set_error(e.to_string());
                return NG_ERR_INVALID;
            }
        };
        match t.table.norm_of(g.desc, &elem) {
            Some(n) => {
                unsafe { *out_norm = n };
                NG_OK
            }
            None => {
                set_error(format!(
                    "norm exceeds table radius {}",
                    t.table.radius()
                ));
                NG_ERR_OUT_OF_RADIUS
            }
        }
    })
}

/// Save a table to `path` in the checksummed cache format.
///
/// # Safety
/// `t` must be NULL or live; `path` NULL or NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn ng_table_save(t: *const NgTable, path: *const c_char) -> i32 {
    guarded(NG_ERR_PANIC, || {
        clear_error();
        let Some(t) = (unsafe { t.as_ref() }) else {
            set_error("table handle is NULL");
            return NG_ERR_NULL;
        };
        let Some(path) = (unsafe { cstr(path) }) else {
            set_error("path is NULL or not UTF-8");
            return NG_ERR_NULL;
        };
        match save_table(&t.table, Path::new(path)) {
            Ok(()) => NG_OK,
            Err(e) => {
                set_error(e.to_string());
                NG_ERR_RESOURCE
            }
        }
    })
}

/// Load a table for `g` from `path`, verifying format, fingerprint, and
/// checksum. Returns NULL and sets the error on failure.
///
/// # Safety
/// `g` must be NULL or live; `path` NULL or NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn ng_table_load(
    g: *const NgGroup,
    path: *const c_char,
) -> *mut NgTable {
    guarded(ptr::null_mut(), || {
        clear_error();
        let Some(g) = (unsafe { g.as_ref() }) else {
            set_error("group handle is NULL");
            return ptr::null_mut();
        };
        let Some(path) = (unsafe { cstr(path) }) else {
            set_error("path is NULL or not UTF-8");
            return ptr::null_mut();
        };
        match load_table(Path::new(path), g.desc, &g.gens) {
            Ok(table) => Box::into_raw(Box::new(NgTable { table })),
            Err(e) => {
                set_error(e.to_string());
                ptr::null_mut()
            }
        }
    })
}
