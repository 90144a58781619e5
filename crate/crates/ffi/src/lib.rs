//! C ABI for vetgate.
//!
//! Every function returns a status code. `VG_OK` and `VG_FAIL` are verdicts;
//! negative codes are errors, described by [`vg_last_error_message`] on the
//! calling thread. Objects are opaque handles released with their `_free`
//! function; strings returned through `char **` out-parameters are released
//! with [`vg_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use vetgate::dsl::{eval_rule, parse_rule, Rule};
use vetgate::engine::{check_vector, Bounds, LengthConstraint, SpecError, VectorSpec, DEFAULT_TOLERANCE};
use vetgate::{CheckOutcome, TypeSet, TypeTag, ValidationError, Value};

/// The value satisfies the check.
pub const VG_OK: i32 = 0;
/// The value violates the check; a message is available.
pub const VG_FAIL: i32 = 1;
pub const VG_ERR_NULL_POINTER: i32 = -1;
pub const VG_ERR_INVALID_UTF8: i32 = -2;
/// A rule did not parse.
pub const VG_ERR_PARSE: i32 = -3;
pub const VG_ERR_INVALID_ARGUMENT: i32 = -4;
/// An internal error was caught at the boundary.
pub const VG_ERR_PANIC: i32 = -5;

pub const VG_TYPE_NULL: u32 = 1 << 0;
pub const VG_TYPE_BOOL: u32 = 1 << 1;
pub const VG_TYPE_INT: u32 = 1 << 2;
pub const VG_TYPE_FLOAT: u32 = 1 << 3;
pub const VG_TYPE_STR: u32 = 1 << 4;
pub const VG_TYPE_FACTOR: u32 = 1 << 5;
pub const VG_TYPE_LIST: u32 = 1 << 6;

/// A value to be checked.
pub struct VgValue(Value);

/// A parsed rule.
pub struct VgRule(Rule);

/// A compiled vector specification.
pub struct VgSpec(VectorSpec);

/// Options for [`vg_spec_new`]. Start from [`vg_spec_options_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct VgSpecOptions {
    /// Bitwise or of `VG_TYPE_*` flags.
    pub types: u32,
    pub any_missing_ok: bool,
    pub all_missing_ok: bool,
    /// Negative for no constraint.
    pub min_len: i64,
    /// Negative for no constraint.
    pub max_len: i64,
    /// NaN for unbounded.
    pub lower: f64,
    /// NaN for unbounded.
    pub upper: f64,
    pub lower_closed: bool,
    pub upper_closed: bool,
    pub integerish: bool,
    pub tolerance: f64,
    pub unique: bool,
    /// Regular expression every string element must match, or NULL.
    pub pattern: *const c_char,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(i32, String);

fn fail<T>(code: i32, msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure(code, msg.into()))
}

fn to_c_string(s: impl Into<String>) -> CString {
    let s: String = s.into();
    CString::new(s.replace('\0', "\\0")).expect("interior NULs replaced")
}

/// Runs `f`, records any error for [`vg_last_error_message`] and turns panics
/// into `VG_ERR_PANIC`.
fn guard(f: impl FnOnce() -> Result<i32, Failure>) -> i32 {
    let (code, msg) = match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(code)) => (code, None),
        Ok(Err(Failure(code, msg))) => (code, Some(msg)),
        Err(_) => (VG_ERR_PANIC, Some("internal error".to_owned())),
    };
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.map(to_c_string));
    code
}

unsafe fn non_null<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().map_or_else(|| fail(VG_ERR_NULL_POINTER, format!("{what} is NULL")), Ok)
}

unsafe fn c_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return fail(VG_ERR_NULL_POINTER, format!("{what} is NULL"));
    }
    CStr::from_ptr(p)
        .to_str()
        .or_else(|_| fail(VG_ERR_INVALID_UTF8, format!("{what} is not valid UTF-8")))
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return fail(VG_ERR_NULL_POINTER, format!("{what} is NULL"));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn put<T>(out: *mut *mut T, v: T) -> Result<(), Failure> {
    if out.is_null() {
        return fail(VG_ERR_NULL_POINTER, "output pointer is NULL");
    }
    *out = Box::into_raw(Box::new(v));
    Ok(())
}

unsafe fn put_message(out: *mut *mut c_char, outcome: &CheckOutcome) {
    if !out.is_null() {
        *out = match outcome.message() {
            Some(m) => to_c_string(m).into_raw(),
            None => ptr::null_mut(),
        };
    }
}

fn verdict(outcome: &CheckOutcome) -> i32 {
    if outcome.is_ok() {
        VG_OK
    } else {
        VG_FAIL
    }
}

unsafe fn cells<T: Copy, U>(
    data: *const T,
    missing: *const u8,
    len: usize,
    f: impl Fn(T) -> U,
) -> Result<Vec<Option<U>>, Failure> {
    let data = slice(data, len, "data")?;
    let missing = if missing.is_null() { None } else { Some(slice(missing, len, "missing")?) };
    Ok(data
        .iter()
        .enumerate()
        .map(|(i, &v)| match missing {
            Some(m) if m[i] != 0 => None,
            _ => Some(f(v)),
        })
        .collect())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn vg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last error on this thread, or NULL after a call that
/// succeeded. Valid until the next vetgate call on the same thread.
#[no_mangle]
pub extern "C" fn vg_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Floating point vector. `missing` may be NULL; a non-zero entry marks the
/// element as missing. NaN elements are missing too.
///
/// # Safety
/// `data` and a non-NULL `missing` must point to `len` readable elements.
#[no_mangle]
pub unsafe extern "C" fn vg_value_float_new(data: *const f64, missing: *const u8, len: usize, out: *mut *mut VgValue) -> i32 {
    guard(|| {
        put(out, VgValue(Value::float(cells(data, missing, len, |v| v)?)))?;
        Ok(VG_OK)
    })
}

/// Integer vector; see [`vg_value_float_new`].
///
/// # Safety
/// As for [`vg_value_float_new`].
#[no_mangle]
pub unsafe extern "C" fn vg_value_int_new(data: *const i64, missing: *const u8, len: usize, out: *mut *mut VgValue) -> i32 {
    guard(|| {
        put(out, VgValue(Value::int(cells(data, missing, len, |v| v)?)))?;
        Ok(VG_OK)
    })
}

/// Logical vector; non-zero bytes are true.
///
/// # Safety
/// As for [`vg_value_float_new`].
#[no_mangle]
pub unsafe extern "C" fn vg_value_bool_new(data: *const u8, missing: *const u8, len: usize, out: *mut *mut VgValue) -> i32 {
    guard(|| {
        put(out, VgValue(Value::bool(cells(data, missing, len, |v| v != 0)?)))?;
        Ok(VG_OK)
    })
}

/// String vector. A NULL element is missing.
///
/// # Safety
/// `data` must point to `len` pointers, each NULL or a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn vg_value_str_new(data: *const *const c_char, len: usize, out: *mut *mut VgValue) -> i32 {
    guard(|| {
        let items = slice(data, len, "data")?
            .iter()
            .enumerate()
            .map(|(i, &p)| {
                if p.is_null() {
                    Ok(None)
                } else {
                    c_str(p, &format!("element {}", i + 1)).map(|s| Some(s.to_owned()))
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        put(out, VgValue(Value::str(items)))?;
        Ok(VG_OK)
    })
}

/// The null value.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vg_value_null_new(out: *mut *mut VgValue) -> i32 {
    guard(|| {
        put(out, VgValue(Value::null()))?;
        Ok(VG_OK)
    })
}

/// # Safety
/// `value` must be NULL or a handle from a `vg_value_*_new` function that
/// has not been freed.
#[no_mangle]
pub unsafe extern "C" fn vg_value_free(value: *mut VgValue) {
    if !value.is_null() {
        drop(Box::from_raw(value));
    }
}

/// Parses a rule. On `VG_ERR_PARSE` the error message includes the position
/// and a caret diagram.
///
/// # Safety
/// `text` must be NULL or NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vg_rule_parse(text: *const c_char, out: *mut *mut VgRule) -> i32 {
    guard(|| {
        let text = c_str(text, "rule")?;
        match parse_rule(text) {
            Ok(rule) => {
                put(out, VgRule(rule))?;
                Ok(VG_OK)
            }
            Err(e) => fail(VG_ERR_PARSE, format!("invalid rule {e}\n{}", e.diagram(text))),
        }
    })
}

/// Canonical text of a rule, released with [`vg_string_free`].
///
/// # Safety
/// `rule` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vg_rule_render(rule: *const VgRule, out: *mut *mut c_char) -> i32 {
    guard(|| {
        let rule = non_null(rule, "rule")?;
        if out.is_null() {
            return fail(VG_ERR_NULL_POINTER, "output pointer is NULL");
        }
        *out = to_c_string(rule.0.to_string()).into_raw();
        Ok(VG_OK)
    })
}

/// # Safety
/// `rule` must be NULL or a live handle from [`vg_rule_parse`].
#[no_mangle]
pub unsafe extern "C" fn vg_rule_free(rule: *mut VgRule) {
    if !rule.is_null() {
        drop(Box::from_raw(rule));
    }
}

/// Checks a value against a parsed rule. On `VG_FAIL`, `*message` (if
/// `message` is not NULL) receives the failure text; otherwise NULL.
///
/// # Safety
/// Handles must be live; `message` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn vg_rule_check(value: *const VgValue, rule: *const VgRule, message: *mut *mut c_char) -> i32 {
    guard(|| {
        let outcome = eval_rule(&non_null(value, "value")?.0, &non_null(rule, "rule")?.0);
        put_message(message, &outcome);
        Ok(verdict(&outcome))
    })
}

/// Parses `rule` and checks `value` against it: `VG_OK`, `VG_FAIL`, or an
/// error code.
///
/// # Safety
/// `value` must be live; `rule` must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn vg_qtest(value: *const VgValue, rule: *const c_char) -> i32 {
    guard(|| qcheck(value, rule).map(|o| verdict(&o)))
}

unsafe fn qcheck(value: *const VgValue, rule: *const c_char) -> Result<CheckOutcome, Failure> {
    let value = non_null(value, "value")?;
    let text = c_str(rule, "rule")?;
    match parse_rule(text) {
        Ok(rule) => Ok(eval_rule(&value.0, &rule)),
        Err(e) => fail(VG_ERR_PARSE, format!("invalid rule {e}\n{}", e.diagram(text))),
    }
}

/// Like [`vg_qtest`], also returning the failure message.
///
/// # Safety
/// As for [`vg_rule_check`], with `rule` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn vg_qcheck(value: *const VgValue, rule: *const c_char, message: *mut *mut c_char) -> i32 {
    guard(|| {
        let outcome = qcheck(value, rule)?;
        put_message(message, &outcome);
        Ok(verdict(&outcome))
    })
}

/// Like [`vg_qcheck`], but the message is the assertion error naming `label`.
///
/// # Safety
/// As for [`vg_qcheck`], with `label` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn vg_qassert(
    value: *const VgValue,
    rule: *const c_char,
    label: *const c_char,
    message: *mut *mut c_char,
) -> i32 {
    guard(|| {
        let label = c_str(label, "label")?;
        let outcome = match qcheck(value, rule)? {
            CheckOutcome::Fail(m) => CheckOutcome::Fail(ValidationError::new(label, &m).message().to_owned()),
            ok => ok,
        };
        put_message(message, &outcome);
        Ok(verdict(&outcome))
    })
}

/// Defaults: any type, missing values allowed, no length, bounds, pattern
/// or uniqueness constraint.
#[no_mangle]
pub extern "C" fn vg_spec_options_default() -> VgSpecOptions {
    VgSpecOptions {
        types: VG_TYPE_BOOL | VG_TYPE_INT | VG_TYPE_FLOAT | VG_TYPE_STR | VG_TYPE_FACTOR | VG_TYPE_LIST,
        any_missing_ok: true,
        all_missing_ok: true,
        min_len: -1,
        max_len: -1,
        lower: f64::NAN,
        upper: f64::NAN,
        lower_closed: true,
        upper_closed: true,
        integerish: false,
        tolerance: DEFAULT_TOLERANCE,
        unique: false,
        pattern: ptr::null(),
    }
}

fn type_set(mask: u32) -> Result<TypeSet, Failure> {
    const FLAGS: [(u32, TypeTag); 7] = [
        (VG_TYPE_NULL, TypeTag::Null),
        (VG_TYPE_BOOL, TypeTag::Bool),
        (VG_TYPE_INT, TypeTag::Int),
        (VG_TYPE_FLOAT, TypeTag::Float),
        (VG_TYPE_STR, TypeTag::Str),
        (VG_TYPE_FACTOR, TypeTag::Factor),
        (VG_TYPE_LIST, TypeTag::List),
    ];
    let known = FLAGS.iter().fold(0, |m, (f, _)| m | f);
    if mask & !known != 0 {
        return fail(VG_ERR_INVALID_ARGUMENT, format!("unknown type flags {:#x}", mask & !known));
    }
    let tags: Vec<TypeTag> = FLAGS.iter().filter(|(f, _)| mask & f != 0).map(|&(_, t)| t).collect();
    Ok(TypeSet::of(&tags))
}

fn optional_len(v: i64) -> Option<usize> {
    usize::try_from(v).ok()
}

fn optional_bound(v: f64) -> Option<f64> {
    (!v.is_nan()).then_some(v)
}

/// Compiles a vector specification.
///
/// # Safety
/// `options` must be readable; its `pattern` NULL or NUL-terminated; `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn vg_spec_new(options: *const VgSpecOptions, out: *mut *mut VgSpec) -> i32 {
    guard(|| {
        let o = *non_null(options, "options")?;
        let invalid = |e: SpecError| Failure(VG_ERR_INVALID_ARGUMENT, e.to_string());
        let mut b = VectorSpec::builder(type_set(o.types)?)
            .any_missing_ok(o.any_missing_ok)
            .all_missing_ok(o.all_missing_ok)
            .length(LengthConstraint::new(None, optional_len(o.min_len), optional_len(o.max_len)).map_err(invalid)?)
            .unique(o.unique);
        let (lower, upper) = (optional_bound(o.lower), optional_bound(o.upper));
        if lower.is_some() || upper.is_some() {
            b = b.bounds(Bounds::new(lower, o.lower_closed, upper, o.upper_closed).map_err(invalid)?);
        }
        if o.integerish {
            b = b.integerish(o.tolerance);
        }
        if !o.pattern.is_null() {
            b = b.pattern(c_str(o.pattern, "pattern")?);
        }
        put(out, VgSpec(b.build().map_err(invalid)?))?;
        Ok(VG_OK)
    })
}

/// # Safety
/// `spec` must be NULL or a live handle from [`vg_spec_new`].
#[no_mangle]
pub unsafe extern "C" fn vg_spec_free(spec: *mut VgSpec) {
    if !spec.is_null() {
        drop(Box::from_raw(spec));
    }
}

/// Checks a value against a specification; see [`vg_rule_check`].
///
/// # Safety
/// Handles must be live; `message` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn vg_check_vector(value: *const VgValue, spec: *const VgSpec, message: *mut *mut c_char) -> i32 {
    guard(|| {
        let outcome = check_vector(&non_null(value, "value")?.0, &non_null(spec, "spec")?.0);
        put_message(message, &outcome);
        Ok(verdict(&outcome))
    })
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be NULL or a string returned through an out-parameter of this
/// library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn vg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
