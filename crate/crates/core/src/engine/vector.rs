use std::collections::HashSet;

use regex::Regex;

use crate::value::{missing_kind_of, Cells, MissingKind, TypeSet, TypeTag, Value};

use super::names::check_names;
use super::scan::{FloatScan, NumberTest};
use super::spec::{Bounds, VectorSpec};
use super::{integerish_is_ok, missing_found, type_mismatch, CheckOutcome, ScanProbe};

/// Checks a vector against `spec`.
///
/// Order: type, length, names, one element pass (missingness, bounds,
/// integerish, pattern), all-missing, then uniqueness.
pub fn check_vector(x: &Value, spec: &VectorSpec) -> CheckOutcome {
    check_vector_probed(x, spec, &mut ())
}

/// [`check_vector`] reporting each element inspection to `probe`.
pub fn check_vector_probed<P: ScanProbe>(x: &Value, spec: &VectorSpec, probe: &mut P) -> CheckOutcome {
    run(x, spec, spec.expected, spec.integerish, spec.tolerance, probe).into()
}

/// Checks that `x` is Int, or Bool/Float with every present element within
/// `tolerance` of an integer, plus the other constraints of `spec`.
pub fn check_integerish(x: &Value, tolerance: f64, spec: &VectorSpec) -> CheckOutcome {
    check_integerish_probed(x, tolerance, spec, &mut ())
}

pub fn check_integerish_probed<P: ScanProbe>(
    x: &Value,
    tolerance: f64,
    spec: &VectorSpec,
    probe: &mut P,
) -> CheckOutcome {
    debug_assert!(tolerance > 0.0);
    let types = TypeSet::of(&[TypeTag::Bool, TypeTag::Int, TypeTag::Float]);
    run(x, spec, types, true, tolerance, probe).into()
}

fn run<P: ScanProbe>(
    x: &Value,
    spec: &VectorSpec,
    types: TypeSet,
    integerish: bool,
    tolerance: f64,
    probe: &mut P,
) -> Result<(), String> {
    let tag = x.type_of();
    if !types.contains(tag) {
        return Err(type_mismatch(types, tag));
    }
    let cells = x.cells().ok_or_else(|| type_mismatch(types, tag))?;
    let n = cells.len();
    if let Some(m) = spec.length.violation("length", n) {
        return Err(m);
    }
    if let Some(m) = check_names(x.names(), spec.names).into_result().err() {
        return Err(m);
    }
    let scan = Scan {
        any_missing_ok: spec.any_missing_ok,
        bounds: spec.bounds.as_ref(),
        integerish: integerish.then_some(tolerance),
        pattern: spec.pattern.as_ref(),
    };
    let present = scan.run(cells, probe)?;
    if !spec.all_missing_ok && n > 0 && present == 0 {
        return Err(format!(
            "Must not contain only missing values, but all {n} elements are missing"
        ));
    }
    if spec.unique {
        if let Some(i) = first_duplicate(cells) {
            return Err(format!(
                "Must contain unique values, but has duplicate {} (element {})",
                describe_element(cells, i),
                i + 1
            ));
        }
    }
    Ok(())
}

/// Per-element tests applied in the single pass.
#[derive(Clone, Copy)]
struct Scan<'a> {
    any_missing_ok: bool,
    bounds: Option<&'a Bounds>,
    integerish: Option<f64>,
    pattern: Option<&'a Regex>,
}

impl Scan<'_> {
    /// Returns the number of present elements, or the first violation.
    fn run<P: ScanProbe>(&self, cells: Cells<'_>, probe: &mut P) -> Result<usize, String> {
        match cells {
            Cells::Float(xs) => self.floats(xs, probe),
            // Int elements are integers by construction.
            Cells::Int(xs) => Scan {
                integerish: None,
                ..*self
            }
            .numbers(xs.iter().map(|v| v.map(|n| n as f64)), probe),
            Cells::Bool(xs) => self.numbers(xs.iter().map(|v| v.map(|b| b as u8 as f64)), probe),
            Cells::Str(xs) => self.texts(xs.iter().map(|v| v.as_deref()), probe),
            Cells::Factor(f) => self.texts((0..f.codes().len()).map(|i| f.label(i)), probe),
            Cells::List(xs) => {
                let mut present = 0;
                for (i, v) in xs.iter().enumerate() {
                    probe.inspect(i);
                    if v.is_null() {
                        if !self.any_missing_ok {
                            return Err(missing_found(MissingKind::Absent, i));
                        }
                    } else {
                        present += 1;
                    }
                }
                Ok(present)
            }
        }
    }

    #[inline]
    fn number_ok(&self, v: f64, i: usize) -> Result<(), String> {
        if let Some(b) = self.bounds {
            if !b.contains(v) {
                return Err(element_msg(b.violation(v).unwrap_or_default(), i));
            }
        }
        if let Some(tol) = self.integerish {
            if !integerish_is_ok(v, tol) {
                return Err(element_msg(
                    format!("Must be integerish, but is {}", super::fmt_num(v)),
                    i,
                ));
            }
        }
        Ok(())
    }

    fn floats<P: ScanProbe>(&self, xs: &[f64], probe: &mut P) -> Result<usize, String> {
        let scan = FloatScan {
            test: NumberTest::new(self.bounds, self.integerish),
            any_missing_ok: self.any_missing_ok,
        };
        match scan.run(xs, probe) {
            Ok(missing) => Ok(xs.len() - missing),
            Err(i) => Err(self.float_violation(xs[i], i)),
        }
    }

    #[cold]
    #[inline(never)]
    fn float_violation(&self, v: f64, i: usize) -> String {
        match missing_kind_of(v) {
            Some(kind) => missing_found(kind, i),
            None => self.number_ok(v, i).expect_err("element failed a number test"),
        }
    }

    fn numbers<P, I>(&self, xs: I, probe: &mut P) -> Result<usize, String>
    where
        P: ScanProbe,
        I: Iterator<Item = Option<f64>>,
    {
        let mut present = 0;
        for (i, v) in xs.enumerate() {
            probe.inspect(i);
            match v {
                None if !self.any_missing_ok => return Err(missing_found(MissingKind::Absent, i)),
                None => {}
                Some(v) => {
                    present += 1;
                    self.number_ok(v, i)?;
                }
            }
        }
        Ok(present)
    }

    fn texts<'s, P, I>(&self, xs: I, probe: &mut P) -> Result<usize, String>
    where
        P: ScanProbe,
        I: Iterator<Item = Option<&'s str>>,
    {
        let mut present = 0;
        for (i, v) in xs.enumerate() {
            probe.inspect(i);
            match v {
                None if !self.any_missing_ok => return Err(missing_found(MissingKind::Absent, i)),
                None => {}
                Some(s) => {
                    present += 1;
                    if let Some(re) = self.pattern {
                        if !re.is_match(s) {
                            return Err(element_msg(
                                format!("Must match pattern '{}', but is '{s}'", re.as_str()),
                                i,
                            ));
                        }
                    }
                }
            }
        }
        Ok(present)
    }
}

fn element_msg(msg: String, i: usize) -> String {
    format!("{msg} (element {})", i + 1)
}

/// Index of the first present element equal to an earlier present element.
/// Missing elements never count as duplicates.
fn first_duplicate(cells: Cells<'_>) -> Option<usize> {
    fn first_dup<T: std::hash::Hash + Eq>(it: impl Iterator<Item = Option<T>>) -> Option<usize> {
        let mut seen = HashSet::new();
        for (i, v) in it.enumerate() {
            if let Some(v) = v {
                if !seen.insert(v) {
                    return Some(i);
                }
            }
        }
        None
    }
    match cells {
        Cells::Bool(xs) => first_dup(xs.iter().copied()),
        Cells::Int(xs) => first_dup(xs.iter().copied()),
        Cells::Float(xs) => first_dup(xs.iter().map(|&v| {
            // -0.0 and 0.0 are the same value
            (!v.is_nan()).then(|| if v == 0.0 { 0u64 } else { v.to_bits() })
        })),
        Cells::Str(xs) => first_dup(xs.iter().map(|v| v.as_deref())),
        Cells::Factor(f) => first_dup(f.codes().iter().copied()),
        Cells::List(xs) => (0..xs.len())
            .find(|&i| !xs[i].is_null() && xs[..i].iter().any(|p| p == &xs[i])),
    }
}

pub(crate) fn describe_element(cells: Cells<'_>, i: usize) -> String {
    match cells {
        Cells::Bool(xs) => xs[i].map_or("NA".into(), |b| b.to_string()),
        Cells::Int(xs) => xs[i].map_or("NA".into(), |n| n.to_string()),
        Cells::Float(xs) => match missing_kind_of(xs[i]) {
            Some(k) => k.to_string(),
            None => super::fmt_num(xs[i]),
        },
        Cells::Str(xs) => xs[i].as_ref().map_or("NA".into(), |s| format!("'{s}'")),
        Cells::Factor(f) => f.label(i).map_or("NA".into(), |s| format!("'{s}'")),
        Cells::List(_) => format!("entry {}", i + 1),
    }
}
