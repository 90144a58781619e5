//! `check_*`, `test_*`, `assert_*` and `expect_*` for every engine check.
//!
//! Options are passed as plain structs with defaults, so a call reads close
//! to its keyword-argument form:
//!
//! ```
//! use vetgate::api::families::{assert_numeric, VectorOpts};
//! use vetgate::Value;
//!
//! let x = Value::float([1.0]);
//! let opts = VectorOpts { any_missing_ok: false, lower: Some(0.0), ..Default::default() };
//! assert_eq!(assert_numeric(&x, &opts, "x").unwrap(), &x);
//! ```
//!
//! Options that contradict each other (a lower bound above the upper bound,
//! an invalid pattern) are a [`UsageError`], never a failed check.

use std::panic::Location;

use super::{outcome_to_assert, outcome_to_expect, Reporter};
use crate::engine::{
    self, Bounds, CheckOutcome, FrameSpec, LengthConstraint, MatrixSpec, NamesPolicy, ScalarKind, SpecError,
    VectorSpec, DEFAULT_TOLERANCE,
};
use crate::error::{Error, UsageError};
use crate::value::{TypeSet, TypeTag, Value};

/// Options shared by the vector checks. Bounds are inclusive.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorOpts {
    pub any_missing_ok: bool,
    pub all_missing_ok: bool,
    pub len: Option<usize>,
    pub min_len: Option<usize>,
    pub max_len: Option<usize>,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub unique: bool,
    pub names: NamesPolicy,
    pub pattern: Option<String>,
    /// Only used by the integerish check.
    pub tolerance: f64,
}

impl Default for VectorOpts {
    fn default() -> Self {
        VectorOpts {
            any_missing_ok: true,
            all_missing_ok: true,
            len: None,
            min_len: None,
            max_len: None,
            lower: None,
            upper: None,
            unique: false,
            names: NamesPolicy::Any,
            pattern: None,
            tolerance: DEFAULT_TOLERANCE,
        }
    }
}

impl VectorOpts {
    /// The engine spec these options describe for the given types.
    pub fn to_spec(&self, types: TypeSet, integerish: bool) -> Result<VectorSpec, SpecError> {
        let mut b = VectorSpec::builder(types)
            .any_missing_ok(self.any_missing_ok)
            .all_missing_ok(self.all_missing_ok)
            .length(LengthConstraint::new(self.len, self.min_len, self.max_len)?)
            .unique(self.unique)
            .names(self.names);
        if self.lower.is_some() || self.upper.is_some() {
            b = b.bounds(Bounds::closed(self.lower, self.upper)?);
        }
        if let Some(p) = &self.pattern {
            b = b.pattern(p.clone());
        }
        if integerish {
            b = b.integerish(self.tolerance);
        }
        b.build()
    }
}

/// Options for the single-element checks. Bounds are inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarOpts {
    pub na_ok: bool,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    /// Counts only: require at least 1.
    pub positive: bool,
    pub tolerance: f64,
}

impl Default for ScalarOpts {
    fn default() -> Self {
        ScalarOpts {
            na_ok: false,
            lower: None,
            upper: None,
            positive: false,
            tolerance: DEFAULT_TOLERANCE,
        }
    }
}

impl ScalarOpts {
    pub fn to_kind(&self, base: ScalarKind) -> Result<ScalarKind, SpecError> {
        let mut kind = base
            .na_ok(self.na_ok)
            .positive(self.positive)
            .with_tolerance(self.tolerance)?;
        if self.lower.is_some() || self.upper.is_some() {
            kind = kind.with_bounds(Bounds::closed(self.lower, self.upper)?)?;
        }
        Ok(kind)
    }
}

macro_rules! family {
    (
        $(#[$doc:meta])*
        $check:ident, $test:ident, $assert:ident, $expect:ident,
        $opts:ty, |$x:ident, $o:ident| $body:expr
    ) => {
        $(#[$doc])*
        pub fn $check($x: &Value, $o: &$opts) -> Result<CheckOutcome, UsageError> {
            Ok($body)
        }

        $(#[$doc])*
        pub fn $test(x: &Value, opts: &$opts) -> Result<bool, UsageError> {
            Ok($check(x, opts)?.is_ok())
        }

        $(#[$doc])*
        pub fn $assert<'a>(x: &'a Value, opts: &$opts, label: &str) -> Result<&'a Value, Error> {
            Ok(outcome_to_assert(x, $check(x, opts)?, label)?)
        }

        $(#[$doc])*
        #[track_caller]
        pub fn $expect<R: Reporter + ?Sized>(
            x: &Value,
            opts: &$opts,
            label: &str,
            reporter: &R,
        ) -> Result<bool, Error> {
            let location = Location::caller();
            Ok(outcome_to_expect($check(x, opts)?, label, reporter, location)?)
        }
    };
}

fn vector(x: &Value, o: &VectorOpts, types: &[TypeTag], integerish: bool) -> Result<CheckOutcome, SpecError> {
    Ok(engine::check_vector(x, &o.to_spec(TypeSet::of(types), integerish)?))
}

fn scalar(x: &Value, o: &ScalarOpts, base: ScalarKind) -> Result<CheckOutcome, SpecError> {
    Ok(engine::check_scalar(x, &o.to_kind(base)?))
}

family!(
    /// Bool vector.
    check_logical, test_logical, assert_logical, expect_logical,
    VectorOpts, |x, o| vector(x, o, &[TypeTag::Bool], false)?
);
family!(
    /// Int vector.
    check_integer, test_integer, assert_integer, expect_integer,
    VectorOpts, |x, o| vector(x, o, &[TypeTag::Int], false)?
);
family!(
    /// Bool, Int or Float vector of integer-valued elements.
    check_integerish, test_integerish, assert_integerish, expect_integerish,
    VectorOpts, |x, o| vector(x, o, &[TypeTag::Bool, TypeTag::Int, TypeTag::Float], true)?
);
family!(
    /// Float vector.
    check_double, test_double, assert_double, expect_double,
    VectorOpts, |x, o| vector(x, o, &[TypeTag::Float], false)?
);
family!(
    /// Int or Float vector.
    check_numeric, test_numeric, assert_numeric, expect_numeric,
    VectorOpts, |x, o| vector(x, o, &[TypeTag::Int, TypeTag::Float], false)?
);
family!(
    /// Str vector.
    check_character, test_character, assert_character, expect_character,
    VectorOpts, |x, o| vector(x, o, &[TypeTag::Str], false)?
);
family!(
    /// Factor.
    check_factor, test_factor, assert_factor, expect_factor,
    VectorOpts, |x, o| vector(x, o, &[TypeTag::Factor], false)?
);
family!(
    /// List.
    check_list, test_list, assert_list, expect_list,
    VectorOpts, |x, o| vector(x, o, &[TypeTag::List], false)?
);
family!(
    /// Single Bool.
    check_flag, test_flag, assert_flag, expect_flag,
    ScalarOpts, |x, o| scalar(x, o, ScalarKind::flag())?
);
family!(
    /// Single integer-valued number.
    check_int, test_int, assert_int, expect_int,
    ScalarOpts, |x, o| scalar(x, o, ScalarKind::int())?
);
family!(
    /// Single non-negative integer-valued number.
    check_count, test_count, assert_count, expect_count,
    ScalarOpts, |x, o| scalar(x, o, ScalarKind::count())?
);
family!(
    /// Single number.
    check_number, test_number, assert_number, expect_number,
    ScalarOpts, |x, o| scalar(x, o, ScalarKind::number())?
);
family!(
    /// Single string.
    check_string, test_string, assert_string, expect_string,
    ScalarOpts, |x, o| scalar(x, o, ScalarKind::string())?
);
family!(
    /// Element names of `x` under a naming policy.
    check_names, test_names, assert_names, expect_names,
    NamesPolicy, |x, o| engine::check_names(x.names(), *o)
);
family!(
    /// Every element of `x` is one of `choices`.
    check_subset, test_subset, assert_subset, expect_subset,
    Value, |x, o| engine::check_subset(x, o)
);
family!(
    /// `x` is a single element of `choices`.
    check_choice, test_choice, assert_choice, expect_choice,
    Value, |x, o| engine::check_choice(x, o)
);
family!(
    /// `x` and the option value hold the same set of elements.
    check_set_equal, test_set_equal, assert_set_equal, expect_set_equal,
    Value, |x, o| engine::check_set_equal(x, o)
);
family!(
    /// Frame shape, columns and missingness.
    check_frame, test_frame, assert_frame, expect_frame,
    FrameSpec, |x, o| engine::check_frame(x, o)
);
family!(
    /// Matrix element type, dimensions, dimnames and missingness.
    check_matrix, test_matrix, assert_matrix, expect_matrix,
    MatrixSpec, |x, o| engine::check_matrix(x, o)
);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::api::CollectingReporter;

    #[test]
    fn assert_numeric_with_options() {
        let x = Value::float([1.0]);
        let opts = VectorOpts {
            any_missing_ok: false,
            lower: Some(0.0),
            ..Default::default()
        };
        assert_eq!(assert_numeric(&x, &opts, "x").unwrap(), &x);
        let err = assert_numeric(&Value::float([-2.0]), &opts, "x").unwrap_err();
        assert_eq!(err.to_string(), "Assertion on 'x' failed: Must be >= 0, but is -2 (element 1)");
    }

    #[test]
    fn scalar_examples() {
        let d = ScalarOpts::default();
        assert!(test_count(&Value::float([2.0]), &d).unwrap());
        assert!(!test_count(&Value::float([-1.0]), &d).unwrap());
        assert_eq!(
            check_string(&Value::int([1]), &d).unwrap(),
            CheckOutcome::Fail("Must be of type 'Str', not 'Int'".into())
        );
        assert!(test_flag(&Value::bool([true]), &d).unwrap());
    }

    #[test]
    fn contradictory_options_are_usage_errors() {
        let opts = VectorOpts {
            lower: Some(1.0),
            upper: Some(0.0),
            ..Default::default()
        };
        assert!(check_numeric(&Value::float([0.5]), &opts).is_err());
        let bad = VectorOpts {
            pattern: Some("(".into()),
            ..Default::default()
        };
        assert!(matches!(assert_character(&Value::strs(["a"]), &bad, "x"), Err(Error::Usage(_))));
        let flag_bounds = ScalarOpts {
            lower: Some(0.0),
            ..Default::default()
        };
        assert!(test_flag(&Value::bool([true]), &flag_bounds).is_err());
    }

    #[test]
    fn families_agree() {
        let opts = VectorOpts {
            len: Some(2),
            ..Default::default()
        };
        let r = CollectingReporter::new();
        for x in [Value::strs(["a", "b"]), Value::strs(["a"]), Value::int([1, 2])] {
            let outcome = check_character(&x, &opts).unwrap();
            assert_eq!(test_character(&x, &opts).unwrap(), outcome.is_ok());
            assert_eq!(assert_character(&x, &opts, "x").is_ok(), outcome.is_ok());
            assert_eq!(expect_character(&x, &opts, "x", &r).unwrap(), outcome.is_ok());
            assert_eq!(r.records().last().unwrap().message.as_deref(), outcome.message());
        }
    }

    #[test]
    fn sets_and_names() {
        let abc = Value::strs(["a", "b", "c"]);
        assert!(test_subset(&Value::strs(["a", "c"]), &abc).unwrap());
        assert!(test_choice(&Value::strs(["b"]), &abc).unwrap());
        assert!(!test_set_equal(&Value::strs(["b"]), &abc).unwrap());
        let named = Value::int([1, 2])
            .with_names(vec![Some("a".into()), Some("a".into())])
            .unwrap();
        assert!(test_names(&named, &NamesPolicy::Named).unwrap());
        assert!(!test_names(&named, &NamesPolicy::Unique).unwrap());
    }
}
