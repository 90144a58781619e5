//! The four calling conventions over every check.
//!
//! * `check` returns the [`CheckOutcome`] itself.
//! * `test` returns a `bool` and never fails.
//! * `assert` returns its input on success and a [`ValidationError`] otherwise.
//! * `expect` forwards an [`ExpectationRecord`] to an injected [`Reporter`].
//!
//! [`families`] binds all four to each engine check under names like
//! `assert_numeric`, `test_count` and `check_string`.

pub mod families;

use std::fmt;
use std::panic::Location;
use std::sync::{Arc, Mutex};

use crate::dsl::{eval_rule, Rule};
use crate::engine::{check_vector, CheckOutcome, VectorSpec};
use crate::error::ValidationError;
use crate::value::Value;

type CheckFn = dyn Fn(&Value) -> CheckOutcome + Send + Sync;

/// A named check that can be lifted into every family.
#[derive(Clone)]
pub struct CheckFunction {
    name: String,
    callable: Arc<CheckFn>,
}

impl CheckFunction {
    pub fn new<F>(name: impl Into<String>, f: F) -> Self
    where
        F: Fn(&Value) -> CheckOutcome + Send + Sync + 'static,
    {
        CheckFunction {
            name: name.into(),
            callable: Arc::new(f),
        }
    }

    pub fn from_spec(name: impl Into<String>, spec: VectorSpec) -> Self {
        Self::new(name, move |x| check_vector(x, &spec))
    }

    /// Named after the rule's rendering.
    pub fn from_rule(rule: Rule) -> Self {
        Self::new(rule.to_string(), move |x| eval_rule(x, &rule))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn call(&self, x: &Value) -> CheckOutcome {
        (self.callable)(x)
    }
}

impl fmt::Debug for CheckFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CheckFunction").field("name", &self.name).finish_non_exhaustive()
    }
}

/// One pass/fail result forwarded to a [`Reporter`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpectationRecord {
    pub label: String,
    pub passed: bool,
    /// Present iff `passed` is false.
    pub message: Option<String>,
    /// `file:line` of the `expect` call, when known.
    pub source_hint: Option<String>,
}

impl ExpectationRecord {
    fn from_outcome(label: &str, outcome: CheckOutcome, source_hint: Option<String>) -> Self {
        let message = outcome.message().map(str::to_owned);
        ExpectationRecord {
            label: label.to_owned(),
            passed: message.is_none(),
            message,
            source_hint,
        }
    }
}

/// Receives expectation records in invocation order.
pub trait Reporter: Send + Sync {
    fn report(&self, record: ExpectationRecord) -> Result<(), ValidationError>;
}

/// Keeps every record in an ordered log.
#[derive(Debug, Default)]
pub struct CollectingReporter {
    log: Mutex<Vec<ExpectationRecord>>,
}

impl CollectingReporter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn records(&self) -> Vec<ExpectationRecord> {
        self.log.lock().unwrap_or_else(|e| e.into_inner()).clone()
    }

    pub fn failures(&self) -> usize {
        self.records().iter().filter(|r| !r.passed).count()
    }
}

impl Reporter for CollectingReporter {
    fn report(&self, record: ExpectationRecord) -> Result<(), ValidationError> {
        self.log.lock().unwrap_or_else(|e| e.into_inner()).push(record);
        Ok(())
    }
}

/// Turns the first failing record into an error.
#[derive(Debug, Default, Clone, Copy)]
pub struct FailFastReporter;

impl Reporter for FailFastReporter {
    fn report(&self, record: ExpectationRecord) -> Result<(), ValidationError> {
        match record.message {
            None => Ok(()),
            Some(m) => Err(ValidationError::new(&record.label, &m)),
        }
    }
}

impl<R: Reporter + ?Sized> Reporter for Arc<R> {
    fn report(&self, record: ExpectationRecord) -> Result<(), ValidationError> {
        (**self).report(record)
    }
}

impl<R: Reporter + ?Sized> Reporter for &R {
    fn report(&self, record: ExpectationRecord) -> Result<(), ValidationError> {
        (**self).report(record)
    }
}

pub fn check(x: &Value, check: &CheckFunction) -> CheckOutcome {
    check.call(x)
}

pub fn test(x: &Value, check: &CheckFunction) -> bool {
    check.call(x).is_ok()
}

/// Returns `x` unchanged, or an error labelled with `label`.
pub fn assert<'a>(x: &'a Value, check: &CheckFunction, label: &str) -> Result<&'a Value, ValidationError> {
    outcome_to_assert(x, check.call(x), label)
}

/// Reports the outcome and returns whether it passed. Only the reporter
/// can turn a failure into an error.
#[track_caller]
pub fn expect<R: Reporter + ?Sized>(
    x: &Value,
    check: &CheckFunction,
    label: &str,
    reporter: &R,
) -> Result<bool, ValidationError> {
    outcome_to_expect(check.call(x), label, reporter, Location::caller())
}

pub(crate) fn outcome_to_assert<'a>(
    x: &'a Value,
    outcome: CheckOutcome,
    label: &str,
) -> Result<&'a Value, ValidationError> {
    match outcome {
        CheckOutcome::Ok => Ok(x),
        CheckOutcome::Fail(m) => Err(ValidationError::new(label, &m)),
    }
}

pub(crate) fn outcome_to_expect<R: Reporter + ?Sized>(
    outcome: CheckOutcome,
    label: &str,
    reporter: &R,
    location: &Location<'_>,
) -> Result<bool, ValidationError> {
    let hint = format!("{}:{}", location.file(), location.line());
    let record = ExpectationRecord::from_outcome(label, outcome, Some(hint));
    let passed = record.passed;
    reporter.report(record)?;
    Ok(passed)
}

/// An assertion built from a custom check.
#[derive(Debug, Clone)]
pub struct Assertion(CheckFunction);

impl Assertion {
    pub fn call<'a>(&self, x: &'a Value, label: &str) -> Result<&'a Value, ValidationError> {
        assert(x, &self.0, label)
    }
}

/// A predicate built from a custom check.
#[derive(Debug, Clone)]
pub struct Predicate(CheckFunction);

impl Predicate {
    pub fn call(&self, x: &Value) -> bool {
        test(x, &self.0)
    }
}

/// An expectation built from a custom check, bound to its reporter.
#[derive(Clone)]
pub struct Expectation {
    check: CheckFunction,
    reporter: Arc<dyn Reporter>,
}

impl Expectation {
    #[track_caller]
    pub fn call(&self, x: &Value, label: &str) -> Result<bool, ValidationError> {
        expect(x, &self.check, label, self.reporter.as_ref())
    }
}

impl fmt::Debug for Expectation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Expectation").field("check", &self.check).finish_non_exhaustive()
    }
}

pub fn make_assertion(check: CheckFunction) -> Assertion {
    Assertion(check)
}

pub fn make_test(check: CheckFunction) -> Predicate {
    Predicate(check)
}

pub fn make_expectation(check: CheckFunction, reporter: Arc<dyn Reporter>) -> Expectation {
    Expectation { check, reporter }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Bounds;
    use crate::value::{Atomic, TypeSet};

    fn positive() -> CheckFunction {
        let spec = VectorSpec::builder(TypeSet::numeric())
            .bounds(Bounds::at_least(0.0))
            .build()
            .unwrap();
        CheckFunction::from_spec("positive", spec)
    }

    fn square() -> CheckFunction {
        CheckFunction::new("square", |x| match x.as_matrix() {
            Some(m) if m.nrow() == m.ncol() => CheckOutcome::Ok,
            Some(m) => CheckOutcome::Fail(format!("Must be square, but has dimensions {}x{}", m.nrow(), m.ncol())),
            None => CheckOutcome::Fail(format!("Must be a Matrix, but is of type '{}'", x.type_of())),
        })
    }

    #[test]
    fn assert_passes_value_through() {
        let x = Value::float([1.0]);
        assert_eq!(assert(&x, &positive(), "x").unwrap(), &x);
        let err = assert(&Value::strs(["a"]), &positive(), "x").unwrap_err();
        assert!(err.message().contains("Must be of type"));
        assert_eq!(
            err.message(),
            format!("Assertion on 'x' failed: {}", check(&Value::strs(["a"]), &positive()))
        );
    }

    #[test]
    fn test_never_fails() {
        assert!(test(&Value::float([1.0]), &positive()));
        assert!(!test(&Value::float([-1.0]), &positive()));
        assert!(!test(&Value::null(), &positive()));
    }

    #[test]
    fn expect_records_in_order() {
        let r = CollectingReporter::new();
        assert!(expect(&Value::float([1.0]), &positive(), "a", &r).unwrap());
        assert!(!expect(&Value::float([-1.0]), &positive(), "b", &r).unwrap());
        let log = r.records();
        assert_eq!(log.len(), 2);
        assert_eq!((log[0].label.as_str(), log[0].passed, log[0].message.as_deref()), ("a", true, None));
        assert_eq!(log[1].message.as_deref(), Some("Must be >= 0, but is -1 (element 1)"));
        assert!(log[1].source_hint.as_deref().unwrap().contains("mod.rs"));
    }

    #[test]
    fn fail_fast_reporter_raises() {
        assert!(expect(&Value::float([1.0]), &positive(), "a", &FailFastReporter).unwrap());
        let err = expect(&Value::float([-1.0]), &positive(), "a", &FailFastReporter).unwrap_err();
        assert_eq!(err.message(), "Assertion on 'a' failed: Must be >= 0, but is -1 (element 1)");
    }

    #[test]
    fn custom_square_matrix() {
        let m = Value::matrix(Atomic::Int((1..=6).map(Some).collect()), 2, 3, None, None).unwrap();
        let assert_square = make_assertion(square());
        assert_eq!(
            assert_square.call(&m, "m").unwrap_err().message(),
            "Assertion on 'm' failed: Must be square, but has dimensions 2x3"
        );
        let sq = Value::matrix(Atomic::Int((1..=4).map(Some).collect()), 2, 2, None, None).unwrap();
        assert_eq!(assert_square.call(&sq, "m").unwrap(), &sq);
        assert!(!make_test(square()).call(&m));
        let r = Arc::new(CollectingReporter::new());
        let e = make_expectation(square(), r.clone());
        assert!(e.call(&sq, "sq").unwrap());
        assert!(!e.call(&m, "m").unwrap());
        assert_eq!(r.failures(), 1);
    }

    #[test]
    fn identity_assertion() {
        let ok = make_assertion(CheckFunction::new("ok", |_| CheckOutcome::Ok));
        for x in [Value::null(), Value::strs(["a"]), Value::float([f64::NAN])] {
            assert_eq!(ok.call(&x, "x").unwrap(), &x);
        }
    }

    #[test]
    fn rule_check_name() {
        let c = CheckFunction::from_rule(crate::dsl::parse_rule("N+[0,]").unwrap());
        assert_eq!(c.name(), "N+[0,]");
        assert!(c.call(&Value::int([1])).is_ok());
        assert!(c.call(&Value::bool([true])).is_fail());
    }
}
