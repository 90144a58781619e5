use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use vetgate_ffi::*;

fn value_float(xs: &[f64], missing: Option<&[u8]>) -> *mut VgValue {
    let mut out = ptr::null_mut();
    let m = missing.map_or(ptr::null(), <[u8]>::as_ptr);
    assert_eq!(unsafe { vg_value_float_new(xs.as_ptr(), m, xs.len(), &mut out) }, VG_OK);
    out
}

fn take_string(p: *mut c_char) -> Option<String> {
    if p.is_null() {
        return None;
    }
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned();
    unsafe { vg_string_free(p) };
    Some(s)
}

fn last_error() -> Option<String> {
    let p = vg_last_error_message();
    (!p.is_null()).then(|| unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned())
}

#[test]
fn qcheck_reports_verdict_and_message() {
    let v = value_float(&[1.0, 2.0, 3.0], Some(&[0, 1, 0]));
    let rule = CString::new("N+[0,]").unwrap();
    let mut msg = ptr::null_mut();
    assert_eq!(unsafe { vg_qcheck(v, rule.as_ptr(), &mut msg) }, VG_FAIL);
    assert_eq!(
        take_string(msg).as_deref(),
        Some("Must not contain missing values, but found NA (element 2)")
    );
    let lax = CString::new("n+[0,]").unwrap();
    assert_eq!(unsafe { vg_qcheck(v, lax.as_ptr(), &mut msg) }, VG_OK);
    assert!(msg.is_null());
    assert_eq!(last_error(), None);
    unsafe { vg_value_free(v) };
}

#[test]
fn qassert_wraps_with_label() {
    let v = value_float(&[-1.0], None);
    let (rule, label) = (CString::new("n[0,]").unwrap(), CString::new("ages").unwrap());
    let mut msg = ptr::null_mut();
    assert_eq!(unsafe { vg_qassert(v, rule.as_ptr(), label.as_ptr(), &mut msg) }, VG_FAIL);
    assert_eq!(
        take_string(msg).as_deref(),
        Some("Assertion on 'ages' failed: Must be >= 0, but is -1 (element 1)")
    );
    unsafe { vg_value_free(v) };
}

#[test]
fn parsed_rule_renders_and_checks() {
    let text = CString::new("n[0,1)").unwrap();
    let mut rule = ptr::null_mut();
    assert_eq!(unsafe { vg_rule_parse(text.as_ptr(), &mut rule) }, VG_OK);
    let mut rendered = ptr::null_mut();
    assert_eq!(unsafe { vg_rule_render(rule, &mut rendered) }, VG_OK);
    assert_eq!(take_string(rendered).as_deref(), Some("n[0,1)"));
    for (x, want) in [(0.0, VG_OK), (0.999, VG_OK), (1.0, VG_FAIL)] {
        let v = value_float(&[x], None);
        assert_eq!(unsafe { vg_rule_check(v, rule, ptr::null_mut()) }, want, "{x}");
        unsafe { vg_value_free(v) };
    }
    unsafe { vg_rule_free(rule) };
}

#[test]
fn errors_set_codes_and_messages() {
    let v = value_float(&[1.0], None);
    let bad = CString::new("Q+").unwrap();
    assert_eq!(unsafe { vg_qtest(v, bad.as_ptr()) }, VG_ERR_PARSE);
    let err = last_error().unwrap();
    assert!(err.contains("position 0") && err.contains('^'), "{err}");

    assert_eq!(unsafe { vg_qtest(ptr::null(), bad.as_ptr()) }, VG_ERR_NULL_POINTER);
    assert_eq!(unsafe { vg_qtest(v, ptr::null()) }, VG_ERR_NULL_POINTER);
    let not_utf8 = [0xffu8, 0];
    assert_eq!(unsafe { vg_qtest(v, not_utf8.as_ptr().cast()) }, VG_ERR_INVALID_UTF8);
    let mut rule = ptr::null_mut();
    assert_eq!(unsafe { vg_rule_parse(bad.as_ptr(), &mut rule) }, VG_ERR_PARSE);
    assert!(rule.is_null());
    assert_eq!(unsafe { vg_value_float_new(ptr::null(), ptr::null(), 3, &mut ptr::null_mut()) }, VG_ERR_NULL_POINTER);

    let mut opts = vg_spec_options_default();
    opts.types = 1 << 20;
    let mut spec = ptr::null_mut();
    assert_eq!(unsafe { vg_spec_new(&opts, &mut spec) }, VG_ERR_INVALID_ARGUMENT);
    opts = vg_spec_options_default();
    opts.lower = 2.0;
    opts.upper = 1.0;
    assert_eq!(unsafe { vg_spec_new(&opts, &mut spec) }, VG_ERR_INVALID_ARGUMENT);
    assert!(spec.is_null());

    // a success clears the previous error
    assert_eq!(unsafe { vg_qtest(v, CString::new("n").unwrap().as_ptr()) }, VG_OK);
    assert_eq!(last_error(), None);
    unsafe { vg_value_free(v) };
}

#[test]
fn spec_handles_check_all_value_kinds() {
    let mut opts = vg_spec_options_default();
    opts.types = VG_TYPE_STR;
    opts.any_missing_ok = false;
    let pattern = CString::new("^[a-z]+$").unwrap();
    opts.pattern = pattern.as_ptr();
    let mut spec = ptr::null_mut();
    assert_eq!(unsafe { vg_spec_new(&opts, &mut spec) }, VG_OK);

    let (a, b) = (CString::new("ok").unwrap(), CString::new("No").unwrap());
    let cells = [a.as_ptr(), b.as_ptr(), ptr::null()];
    let mut strs = ptr::null_mut();
    assert_eq!(unsafe { vg_value_str_new(cells.as_ptr(), 3, &mut strs) }, VG_OK);
    let mut msg = ptr::null_mut();
    assert_eq!(unsafe { vg_check_vector(strs, spec, &mut msg) }, VG_FAIL);
    assert_eq!(take_string(msg).as_deref(), Some("Must match pattern '^[a-z]+$', but is 'No' (element 2)"));

    let (mut ints, mut bools, mut null) = (ptr::null_mut(), ptr::null_mut(), ptr::null_mut());
    assert_eq!(unsafe { vg_value_int_new([1i64, 2].as_ptr(), ptr::null(), 2, &mut ints) }, VG_OK);
    assert_eq!(unsafe { vg_value_bool_new([1u8, 0].as_ptr(), [0u8, 1].as_ptr(), 2, &mut bools) }, VG_OK);
    assert_eq!(unsafe { vg_value_null_new(&mut null) }, VG_OK);
    assert_eq!(unsafe { vg_check_vector(ints, spec, ptr::null_mut()) }, VG_FAIL);
    let rule = CString::new("b2").unwrap();
    assert_eq!(unsafe { vg_qtest(bools, rule.as_ptr()) }, VG_OK);
    let rule = CString::new("B2").unwrap();
    assert_eq!(unsafe { vg_qtest(bools, rule.as_ptr()) }, VG_FAIL);
    let rule = CString::new("0").unwrap();
    assert_eq!(unsafe { vg_qtest(null, rule.as_ptr()) }, VG_OK);

    unsafe {
        for v in [strs, ints, bools, null] {
            vg_value_free(v);
        }
        vg_spec_free(spec);
        vg_value_free(ptr::null_mut());
        vg_string_free(ptr::null_mut());
    }
}

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(vg_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_the_exported_api() {
    let header = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/vetgate.h")).unwrap();
    for decl in [
        "typedef struct VgValue VgValue;",
        "#define VG_ERR_PANIC -5",
        "int32_t vg_qcheck(const struct VgValue *value, const char *rule, char **message);",
        "struct VgSpecOptions vg_spec_options_default(void);",
        "void vg_string_free(char *s);",
    ] {
        assert!(header.contains(decl), "missing: {decl}");
    }
}

fn artifact_dir() -> PathBuf {
    // target/<profile>/deps/<test binary>
    std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_static_library() {
    let lib = artifact_dir().join("libvetgate_ffi.a");
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler or static library");
        return;
    }
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let exe = Path::new(env!("CARGO_TARGET_TMPDIR")).join("vetgate_smoke");
    let status = Command::new("cc")
        .arg(manifest.join("tests/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C compile failed");
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout), format!("ok {}\n", env!("CARGO_PKG_VERSION")));
}
