//! Structured checks over [`Value`](crate::Value)s.
//!
//! Every check runs its cheap whole-value tests (type, length, names) before
//! touching elements, and scans elements in a single pass that stops at the
//! first violation. Apart from uniqueness, no check allocates on the success
//! path.
//!
//! Failure messages follow the template
//! `Must <constraint>, but <observed> (element <i>)` with 1-based indices,
//! omitting the index for whole-value constraints.

mod compound;
mod names;
mod scalar;
mod scan;
mod sets;
mod spec;
mod vector;

use std::fmt;

pub use compound::{check_frame, check_matrix};
pub use names::{check_names, is_identifier, RESERVED_WORDS};
pub use scalar::check_scalar;
pub use sets::{check_choice, check_set_equal, check_subset};
pub use spec::{
    Bounds, FrameSpec, LengthConstraint, MatrixSpec, NamesPolicy, ScalarKind, ScalarType, SpecError,
    VectorSpec, VectorSpecBuilder, DEFAULT_TOLERANCE,
};
pub(crate) use scan::{FloatScan, NumberTest};
pub use vector::{check_integerish, check_integerish_probed, check_vector, check_vector_probed};

use crate::value::{MissingKind, TypeSet, TypeTag};

/// Result of a check: success, or a message naming the first violation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CheckOutcome {
    Ok,
    Fail(String),
}

impl CheckOutcome {
    pub fn is_ok(&self) -> bool {
        matches!(self, CheckOutcome::Ok)
    }

    pub fn is_fail(&self) -> bool {
        !self.is_ok()
    }

    pub fn message(&self) -> Option<&str> {
        match self {
            CheckOutcome::Ok => None,
            CheckOutcome::Fail(m) => Some(m),
        }
    }

    pub fn into_result(self) -> Result<(), String> {
        match self {
            CheckOutcome::Ok => Ok(()),
            CheckOutcome::Fail(m) => Err(m),
        }
    }

    /// Prefixes a failure message, e.g. with the column it came from.
    pub fn context(self, prefix: impl fmt::Display) -> Self {
        match self {
            CheckOutcome::Ok => CheckOutcome::Ok,
            CheckOutcome::Fail(m) => CheckOutcome::Fail(format!("{prefix}: {m}")),
        }
    }
}

impl From<Result<(), String>> for CheckOutcome {
    fn from(r: Result<(), String>) -> Self {
        match r {
            Ok(()) => CheckOutcome::Ok,
            Err(m) => CheckOutcome::Fail(m),
        }
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckOutcome::Ok => f.write_str("Ok"),
            CheckOutcome::Fail(m) => f.write_str(m),
        }
    }
}

/// Observes element inspections during a scan.
///
/// The no-op `()` probe compiles away; tests use [`ElementCounter`] to verify
/// the single-pass and early-exit behaviour.
pub trait ScanProbe {
    fn inspect(&mut self, index: usize);
}

impl ScanProbe for () {
    #[inline(always)]
    fn inspect(&mut self, _index: usize) {}
}

/// Counts inspected elements and remembers the largest index seen.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct ElementCounter {
    pub inspected: usize,
    pub max_index: Option<usize>,
}

impl ScanProbe for ElementCounter {
    fn inspect(&mut self, index: usize) {
        self.inspected += 1;
        self.max_index = Some(self.max_index.map_or(index, |m| m.max(index)));
    }
}

/// Formats a number the way messages and rules print it.
pub fn fmt_num(x: f64) -> String {
    if x == f64::INFINITY {
        "Inf".to_owned()
    } else if x == f64::NEG_INFINITY {
        "-Inf".to_owned()
    } else {
        x.to_string()
    }
}

pub(crate) fn type_list(types: TypeSet) -> String {
    let names: Vec<String> = types.iter().map(|t| format!("'{t}'")).collect();
    match names.split_last() {
        None => String::new(),
        Some((last, [])) => last.clone(),
        Some((last, rest)) => format!("{} or {last}", rest.join(", ")),
    }
}

pub(crate) fn type_mismatch(expected: TypeSet, got: TypeTag) -> String {
    format!("Must be of type {}, not '{got}'", type_list(expected))
}

pub(crate) fn missing_found(kind: MissingKind, index: usize) -> String {
    format!("Must not contain missing values, but found {kind} (element {})", index + 1)
}

#[inline]
pub(crate) fn integerish_is_ok(x: f64, tolerance: f64) -> bool {
    // i64 covers [-2^63, 2^63)
    const I64_RANGE: std::ops::Range<f64> = -9.223_372_036_854_776e18..9.223_372_036_854_776e18;
    (x - x.round()).abs() <= tolerance && I64_RANGE.contains(&x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_formatting() {
        assert_eq!(fmt_num(0.0), "0");
        assert_eq!(fmt_num(-1.0), "-1");
        assert_eq!(fmt_num(0.5), "0.5");
        assert_eq!(fmt_num(f64::INFINITY), "Inf");
        assert_eq!(fmt_num(f64::NEG_INFINITY), "-Inf");
    }

    #[test]
    fn type_lists() {
        assert_eq!(type_list(TypeSet::single(TypeTag::Float)), "'Float'");
        assert_eq!(type_list(TypeSet::numeric()), "'Int' or 'Float'");
        assert_eq!(
            type_list(TypeSet::of(&[TypeTag::Bool, TypeTag::Int, TypeTag::Float])),
            "'Bool', 'Int' or 'Float'"
        );
    }

    #[test]
    fn integerish_range() {
        assert!(integerish_is_ok(1.0 + 1e-12, 1e-8));
        assert!(!integerish_is_ok(1.5, 1e-8));
        assert!(!integerish_is_ok(f64::INFINITY, 1e-8));
        assert!(!integerish_is_ok(1e19, 1e-8));
        assert!(integerish_is_ok(-9.223_372_036_854_776e18, 1e-8));
    }

    #[test]
    fn outcome_helpers() {
        let f = CheckOutcome::Fail("Must x".into());
        assert_eq!(f.clone().context("Column 'a'").message(), Some("Column 'a': Must x"));
        assert!(CheckOutcome::Ok.is_ok());
        assert_eq!(f.into_result(), Err("Must x".to_owned()));
    }
}
