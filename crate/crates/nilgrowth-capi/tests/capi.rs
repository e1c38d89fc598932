//! Exercises the C ABI through the exported functions themselves.

use nilgrowth_capi::*;
use std::ffi::{CStr, CString};
use std::ptr;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take_string(p: *mut std::ffi::c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string();
    unsafe { ng_string_free(p) };
    s
}

unsafe fn last_error() -> String {
    unsafe { take_string(ng_last_error()) }
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(ng_version()) };
    assert!(!v.to_str().unwrap().is_empty());
}

#[test]
fn group_lifecycle_and_errors() {
    unsafe {
        let g = ng_group_new(c("vE").as_ptr());
        assert!(!g.is_null());
        assert_eq!(ng_group_class(g), 3);
        assert_eq!(ng_group_bass_guivarch(g), 7);
        ng_group_free(g);

        let bad = ng_group_new(c("Klein").as_ptr());
        assert!(bad.is_null());
        assert!(last_error().contains("unknown group"));

        assert!(ng_group_new(ptr::null()).is_null());
        ng_group_free(ptr::null_mut()); // no-op
    }
}

#[test]
fn eval_and_word_errors() {
    unsafe {
        let g = ng_group_new(c("Engel").as_ptr());
        let s = take_string(ng_eval(g, c("a b").as_ptr()));
        assert_eq!(s, "x=2 y=0 area=-1 moment=-1/3");

        assert!(ng_eval(g, c("q^2").as_ptr()).is_null());
        assert!(last_error().contains("unknown letter"));
        ng_group_free(g);
    }
}

#[test]
fn alpha_delta_strings() {
    unsafe {
        assert_eq!(take_string(ng_alpha(2)), "0");
        assert_eq!(take_string(ng_alpha(3)), "3/5");
        assert_eq!(take_string(ng_alpha(4)), "17/23");
        assert!(ng_alpha(1).is_null());
        assert_eq!(take_string(ng_delta(5)), "1/5");
    }
}

#[test]
fn criterion_json_shape() {
    unsafe {
        let g = ng_group_new(c("vE").as_ptr());
        let json = take_string(ng_criterion_json(g));
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["verdict"]["kind"], "sub_exponential");
        assert_eq!(v["verdict"]["alpha"], "3/5");
        ng_group_free(g);
    }
}

#[test]
fn table_build_norms_and_persistence() {
    unsafe {
        let g = ng_group_new(c("vE").as_ptr());
        let t = ng_ball(g, 6, 1 << 20, 2);
        assert!(!t.is_null());
        assert_eq!(ng_table_radius(t), 6);
        assert_eq!(ng_table_layer_size(t, 0), 1);
        assert_eq!(ng_table_layer_size(t, 1), 3);
        assert_eq!(ng_table_layer_size(t, 2), 6);
        assert_eq!(ng_table_layer_size(t, 99), 0);

        let mut norm = u32::MAX;
        assert_eq!(
            ng_word_norm(t, g, c("a t a").as_ptr(), &mut norm),
            NG_OK
        );
        assert_eq!(norm, 3);
        // a t t a = a^2: the t-pair cancels.
        assert_eq!(
            ng_word_norm(t, g, c("a t t a").as_ptr(), &mut norm),
            NG_OK
        );
        assert_eq!(norm, 2);
        assert_eq!(
            ng_word_norm(t, g, c("a^9").as_ptr(), &mut norm),
            NG_ERR_OUT_OF_RADIUS
        );
        assert_eq!(
            ng_word_norm(t, g, c("zz").as_ptr(), &mut norm),
            NG_ERR_INVALID
        );

        let dir = tempfile::tempdir().unwrap();
        let path = c(dir.path().join("ve6.nt").to_str().unwrap());
        assert_eq!(ng_table_save(t, path.as_ptr()), NG_OK);
        let loaded = ng_table_load(g, path.as_ptr());
        assert!(!loaded.is_null());
        assert_eq!(ng_table_radius(loaded), 6);

        // Loading against a different group fails the fingerprint.
        let other = ng_group_new(c("vH").as_ptr());
        assert!(ng_table_load(other, path.as_ptr()).is_null());
        assert!(last_error().contains("different group"));

        ng_group_free(other);
        ng_table_free(loaded);
        ng_table_free(t);
        ng_group_free(g);
    }
}

#[test]
fn budget_error_propagates() {
    unsafe {
        let g = ng_group_new(c("Z2").as_ptr());
        let t = ng_ball(g, 10, 4, 1);
        assert!(t.is_null());
        assert!(last_error().contains("memory budget"));
        ng_group_free(g);
    }
}

/// The committed header must declare every exported symbol.
#[test]
fn header_covers_exports() {
    let header = include_str!("../include/nilgrowth.h");
    let source = include_str!("../src/lib.rs");
    let mut exported = Vec::new();
    let mut lines = source.lines().peekable();
    while let Some(line) = lines.next() {
        if line.trim() != "#[no_mangle]" {
            continue;
        }
        // The signature sits on the following line(s).
        let sig = lines.next().unwrap_or_default();
        let name = sig
            .split("fn ")
            .nth(1)
            .and_then(|rest| rest.split('(').next())
            .unwrap_or_default()
            .trim();
        assert!(!name.is_empty(), "could not parse symbol from `{sig}`");
        exported.push(name.to_string());
    }
    assert!(exported.len() >= 15);
    for name in exported {
        assert!(
            header.contains(&format!("{name}(")),
            "header missing declaration for `{name}`"
        );
    }
}
