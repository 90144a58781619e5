use std::collections::HashSet;
use std::fmt;

use regex::Regex;
use thiserror::Error;

use crate::value::{TypeSet, TypeTag};

use super::fmt_num;

/// Default absolute distance to the nearest integer accepted as integerish.
pub const DEFAULT_TOLERANCE: f64 = 1e-8;

/// A spec that violates its own invariants. Always a programmer error.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecError {
    #[error("exact length cannot be combined with a minimum or maximum")]
    ExactWithRange,
    #[error("minimum {min} exceeds maximum {max}")]
    MinAboveMax { min: usize, max: usize },
    #[error("lower bound {lower} exceeds upper bound {upper}")]
    ReversedBounds { lower: f64, upper: f64 },
    #[error("bounds must not be NaN")]
    NanBound,
    #[error("expected type set is empty")]
    NoTypes,
    #[error("type {0} cannot be checked as a vector")]
    NotVectorType(TypeTag),
    #[error("bounds require numeric types or integerish, not {0:?}")]
    BoundsOnNonNumeric(TypeSet),
    #[error("integerish requires Bool, Int or Float types, not {0:?}")]
    IntegerishOnNonNumeric(TypeSet),
    #[error("a pattern requires Str or Factor types, not {0:?}")]
    PatternOnNonText(TypeSet),
    #[error("invalid pattern: {0}")]
    Pattern(String),
    #[error("tolerance must be positive and finite, got {0}")]
    Tolerance(f64),
    #[error("required column '{0}' is listed twice")]
    DuplicateColumn(String),
    #[error("matrix element types must be drawn from Bool, Int, Float and Str, not {0:?}")]
    MatrixTypes(TypeSet),
    #[error("bounds are not allowed for {0} scalars")]
    ScalarBounds(&'static str),
}

/// Length requirement: exact, or an inclusive `[min, max]` range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LengthConstraint {
    exact: Option<usize>,
    min: Option<usize>,
    max: Option<usize>,
}

impl LengthConstraint {
    pub const ANY: LengthConstraint = LengthConstraint {
        exact: None,
        min: None,
        max: None,
    };

    pub fn exact(n: usize) -> Self {
        LengthConstraint {
            exact: Some(n),
            ..Self::ANY
        }
    }

    pub fn min(n: usize) -> Self {
        LengthConstraint {
            min: Some(n),
            ..Self::ANY
        }
    }

    pub fn max(n: usize) -> Self {
        LengthConstraint {
            max: Some(n),
            ..Self::ANY
        }
    }

    pub fn new(exact: Option<usize>, min: Option<usize>, max: Option<usize>) -> Result<Self, SpecError> {
        if exact.is_some() && (min.is_some() || max.is_some()) {
            return Err(SpecError::ExactWithRange);
        }
        if let (Some(min), Some(max)) = (min, max) {
            if min > max {
                return Err(SpecError::MinAboveMax { min, max });
            }
        }
        Ok(LengthConstraint { exact, min, max })
    }

    pub fn between(min: usize, max: usize) -> Result<Self, SpecError> {
        Self::new(None, Some(min), Some(max))
    }

    pub fn exact_len(&self) -> Option<usize> {
        self.exact
    }

    pub fn min_len(&self) -> Option<usize> {
        self.min
    }

    pub fn max_len(&self) -> Option<usize> {
        self.max
    }

    pub fn accepts(&self, n: usize) -> bool {
        self.exact.is_none_or(|e| n == e)
            && self.min.is_none_or(|m| n >= m)
            && self.max.is_none_or(|m| n <= m)
    }

    /// Failure message for `n`, naming the measured quantity.
    pub(crate) fn violation(&self, quantity: &str, n: usize) -> Option<String> {
        let rel = if let Some(e) = self.exact.filter(|&e| n != e) {
            format!("{e}")
        } else if let Some(m) = self.min.filter(|&m| n < m) {
            format!(">= {m}")
        } else {
            format!("<= {}", self.max.filter(|&m| n > m)?)
        };
        Some(format!("Must have {quantity} {rel}, but has {quantity} {n}"))
    }
}

/// Numeric interval. An absent endpoint is an infinite one, so an absent
/// endpoint on an open side still excludes the matching infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    lower: Option<f64>,
    lower_closed: bool,
    upper: Option<f64>,
    upper_closed: bool,
}

impl Bounds {
    pub fn new(
        lower: Option<f64>,
        lower_closed: bool,
        upper: Option<f64>,
        upper_closed: bool,
    ) -> Result<Self, SpecError> {
        if lower.is_some_and(f64::is_nan) || upper.is_some_and(f64::is_nan) {
            return Err(SpecError::NanBound);
        }
        if let (Some(lower), Some(upper)) = (lower, upper) {
            if lower > upper {
                return Err(SpecError::ReversedBounds { lower, upper });
            }
        }
        Ok(Bounds {
            lower,
            lower_closed,
            upper,
            upper_closed,
        })
    }

    /// `[lower, upper]`, either side optional.
    pub fn closed(lower: Option<f64>, upper: Option<f64>) -> Result<Self, SpecError> {
        Self::new(lower, true, upper, true)
    }

    pub fn at_least(lower: f64) -> Self {
        Self::closed(Some(lower), None).expect("single finite bound")
    }

    pub fn lower(&self) -> Option<f64> {
        self.lower
    }

    pub fn upper(&self) -> Option<f64> {
        self.upper
    }

    pub fn lower_closed(&self) -> bool {
        self.lower_closed
    }

    pub fn upper_closed(&self) -> bool {
        self.upper_closed
    }

    #[inline]
    fn lower_ok(&self, x: f64) -> bool {
        let lo = self.lower.unwrap_or(f64::NEG_INFINITY);
        if self.lower_closed {
            x >= lo
        } else {
            x > lo
        }
    }

    #[inline]
    fn upper_ok(&self, x: f64) -> bool {
        let hi = self.upper.unwrap_or(f64::INFINITY);
        if self.upper_closed {
            x <= hi
        } else {
            x < hi
        }
    }

    /// Membership for a present (non-NaN) value.
    #[inline]
    pub fn contains(&self, x: f64) -> bool {
        self.lower_ok(x) && self.upper_ok(x)
    }

    /// The violated side as "Must be ..." text, or `None` if `x` is inside.
    pub(crate) fn violation(&self, x: f64) -> Option<String> {
        if !self.lower_ok(x) {
            let op = if self.lower_closed { ">=" } else { ">" };
            Some(format!(
                "Must be {op} {}, but is {}",
                fmt_num(self.lower.unwrap_or(f64::NEG_INFINITY)),
                fmt_num(x)
            ))
        } else if !self.upper_ok(x) {
            let op = if self.upper_closed { "<=" } else { "<" };
            Some(format!(
                "Must be {op} {}, but is {}",
                fmt_num(self.upper.unwrap_or(f64::INFINITY)),
                fmt_num(x)
            ))
        } else {
            None
        }
    }
}

impl fmt::Display for Bounds {
    /// Interval notation with absent endpoints left empty, e.g. `[0,)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.lower_closed { "[" } else { "(" })?;
        if let Some(l) = self.lower {
            f.write_str(&fmt_num(l))?;
        }
        f.write_str(",")?;
        if let Some(u) = self.upper {
            f.write_str(&fmt_num(u))?;
        }
        f.write_str(if self.upper_closed { "]" } else { ")" })
    }
}

/// Requirements on element names, from weakest to strictest:
/// `Named` ⊇ `Unique` ⊇ `Strict` as acceptance sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NamesPolicy {
    /// No names attached.
    Unnamed,
    #[default]
    Any,
    /// Names present, none missing or empty.
    Named,
    Unique,
    /// Unique and syntactically valid identifiers.
    Strict,
}

const VECTOR_TYPES: [TypeTag; 6] = [
    TypeTag::Bool,
    TypeTag::Int,
    TypeTag::Float,
    TypeTag::Str,
    TypeTag::Factor,
    TypeTag::List,
];

/// Everything a vector check enforces.
#[derive(Debug, Clone)]
pub struct VectorSpec {
    pub(crate) expected: TypeSet,
    pub(crate) integerish: bool,
    pub(crate) tolerance: f64,
    pub(crate) any_missing_ok: bool,
    pub(crate) all_missing_ok: bool,
    pub(crate) length: LengthConstraint,
    pub(crate) bounds: Option<Bounds>,
    pub(crate) unique: bool,
    pub(crate) names: NamesPolicy,
    pub(crate) pattern: Option<Regex>,
}

impl PartialEq for VectorSpec {
    fn eq(&self, other: &Self) -> bool {
        self.expected == other.expected
            && self.integerish == other.integerish
            && self.tolerance == other.tolerance
            && self.any_missing_ok == other.any_missing_ok
            && self.all_missing_ok == other.all_missing_ok
            && self.length == other.length
            && self.bounds == other.bounds
            && self.unique == other.unique
            && self.names == other.names
            && self.pattern.as_ref().map(Regex::as_str) == other.pattern.as_ref().map(Regex::as_str)
    }
}

impl VectorSpec {
    pub fn builder(expected: TypeSet) -> VectorSpecBuilder {
        VectorSpecBuilder {
            expected,
            integerish: false,
            tolerance: DEFAULT_TOLERANCE,
            any_missing_ok: true,
            all_missing_ok: true,
            length: LengthConstraint::ANY,
            bounds: None,
            unique: false,
            names: NamesPolicy::Any,
            pattern: None,
        }
    }

    /// A spec that only checks the type.
    pub fn of(expected: TypeSet) -> Result<Self, SpecError> {
        Self::builder(expected).build()
    }

    pub fn expected(&self) -> TypeSet {
        self.expected
    }

    pub fn integerish(&self) -> bool {
        self.integerish
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn any_missing_ok(&self) -> bool {
        self.any_missing_ok
    }

    pub fn all_missing_ok(&self) -> bool {
        self.all_missing_ok
    }

    pub fn length(&self) -> LengthConstraint {
        self.length
    }

    pub fn bounds(&self) -> Option<Bounds> {
        self.bounds
    }

    pub fn unique(&self) -> bool {
        self.unique
    }

    pub fn names(&self) -> NamesPolicy {
        self.names
    }

    pub fn pattern(&self) -> Option<&str> {
        self.pattern.as_ref().map(Regex::as_str)
    }
}

#[derive(Debug, Clone)]
#[must_use]
pub struct VectorSpecBuilder {
    expected: TypeSet,
    integerish: bool,
    tolerance: f64,
    any_missing_ok: bool,
    all_missing_ok: bool,
    length: LengthConstraint,
    bounds: Option<Bounds>,
    unique: bool,
    names: NamesPolicy,
    pattern: Option<String>,
}

impl VectorSpecBuilder {
    pub fn integerish(mut self, tolerance: f64) -> Self {
        self.integerish = true;
        self.tolerance = tolerance;
        self
    }

    pub fn any_missing_ok(mut self, ok: bool) -> Self {
        self.any_missing_ok = ok;
        self
    }

    pub fn all_missing_ok(mut self, ok: bool) -> Self {
        self.all_missing_ok = ok;
        self
    }

    pub fn length(mut self, length: LengthConstraint) -> Self {
        self.length = length;
        self
    }

    pub fn bounds(mut self, bounds: Bounds) -> Self {
        self.bounds = Some(bounds);
        self
    }

    pub fn maybe_bounds(mut self, bounds: Option<Bounds>) -> Self {
        self.bounds = bounds;
        self
    }

    pub fn unique(mut self, unique: bool) -> Self {
        self.unique = unique;
        self
    }

    pub fn names(mut self, names: NamesPolicy) -> Self {
        self.names = names;
        self
    }

    pub fn pattern(mut self, pattern: impl Into<String>) -> Self {
        self.pattern = Some(pattern.into());
        self
    }

    pub fn build(self) -> Result<VectorSpec, SpecError> {
        let numeric_like = TypeSet::of(&[TypeTag::Bool, TypeTag::Int, TypeTag::Float]);
        if self.expected.is_empty() {
            return Err(SpecError::NoTypes);
        }
        if let Some(t) = self.expected.iter().find(|t| !VECTOR_TYPES.contains(t)) {
            return Err(SpecError::NotVectorType(t));
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(SpecError::Tolerance(self.tolerance));
        }
        if self.integerish && !self.expected.is_subset(numeric_like) {
            return Err(SpecError::IntegerishOnNonNumeric(self.expected));
        }
        if self.bounds.is_some() && !(self.integerish || self.expected.is_subset(TypeSet::numeric())) {
            return Err(SpecError::BoundsOnNonNumeric(self.expected));
        }
        let pattern = match self.pattern {
            None => None,
            Some(p) => {
                if !self.expected.is_subset(TypeSet::of(&[TypeTag::Str, TypeTag::Factor])) {
                    return Err(SpecError::PatternOnNonText(self.expected));
                }
                Some(Regex::new(&p).map_err(|e| SpecError::Pattern(e.to_string()))?)
            }
        };
        Ok(VectorSpec {
            expected: self.expected,
            integerish: self.integerish,
            tolerance: self.tolerance,
            any_missing_ok: self.any_missing_ok,
            all_missing_ok: self.all_missing_ok,
            length: self.length,
            bounds: self.bounds,
            unique: self.unique,
            names: self.names,
            pattern,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarType {
    Flag,
    Int,
    Count,
    Number,
    String,
}

impl ScalarType {
    fn name(self) -> &'static str {
        match self {
            ScalarType::Flag => "Flag",
            ScalarType::Int => "Int",
            ScalarType::Count => "Count",
            ScalarType::Number => "Number",
            ScalarType::String => "String",
        }
    }
}

/// What a single-element check requires.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarKind {
    pub(crate) ty: ScalarType,
    pub(crate) na_ok: bool,
    pub(crate) bounds: Option<Bounds>,
    pub(crate) positive: bool,
    pub(crate) tolerance: f64,
}

impl ScalarKind {
    pub fn new(ty: ScalarType) -> Self {
        ScalarKind {
            ty,
            na_ok: false,
            bounds: None,
            positive: false,
            tolerance: DEFAULT_TOLERANCE,
        }
    }

    pub fn flag() -> Self {
        Self::new(ScalarType::Flag)
    }

    pub fn int() -> Self {
        Self::new(ScalarType::Int)
    }

    pub fn count() -> Self {
        Self::new(ScalarType::Count)
    }

    pub fn number() -> Self {
        Self::new(ScalarType::Number)
    }

    pub fn string() -> Self {
        Self::new(ScalarType::String)
    }

    #[must_use]
    pub fn na_ok(mut self, ok: bool) -> Self {
        self.na_ok = ok;
        self
    }

    /// Requires a count to be at least 1. No effect on other kinds.
    #[must_use]
    pub fn positive(mut self, positive: bool) -> Self {
        self.positive = positive && self.ty == ScalarType::Count;
        self
    }

    pub fn with_bounds(mut self, bounds: Bounds) -> Result<Self, SpecError> {
        match self.ty {
            ScalarType::Flag | ScalarType::String => Err(SpecError::ScalarBounds(self.ty.name())),
            _ => {
                self.bounds = Some(bounds);
                Ok(self)
            }
        }
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Result<Self, SpecError> {
        if !(tolerance > 0.0 && tolerance.is_finite()) {
            return Err(SpecError::Tolerance(tolerance));
        }
        self.tolerance = tolerance;
        Ok(self)
    }

    pub fn scalar_type(&self) -> ScalarType {
        self.ty
    }
}

/// What a frame check requires.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameSpec {
    pub(crate) column_types: Vec<(String, TypeSet)>,
    pub(crate) required_columns: Vec<String>,
    pub(crate) nrows: LengthConstraint,
    pub(crate) ncols: LengthConstraint,
    pub(crate) any_missing_ok: bool,
}

impl Default for FrameSpec {
    fn default() -> Self {
        FrameSpec {
            column_types: Vec::new(),
            required_columns: Vec::new(),
            nrows: LengthConstraint::ANY,
            ncols: LengthConstraint::ANY,
            any_missing_ok: true,
        }
    }
}

impl FrameSpec {
    pub fn new() -> Self {
        Self::default()
    }

    #[must_use]
    pub fn column_type(mut self, name: impl Into<String>, types: TypeSet) -> Self {
        self.column_types.push((name.into(), types));
        self
    }

    pub fn required_columns<I, S>(mut self, names: I) -> Result<Self, SpecError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut seen = HashSet::new();
        for n in &names {
            if !seen.insert(n.as_str()) {
                return Err(SpecError::DuplicateColumn(n.clone()));
            }
        }
        self.required_columns = names;
        Ok(self)
    }

    #[must_use]
    pub fn nrows(mut self, c: LengthConstraint) -> Self {
        self.nrows = c;
        self
    }

    #[must_use]
    pub fn ncols(mut self, c: LengthConstraint) -> Self {
        self.ncols = c;
        self
    }

    #[must_use]
    pub fn any_missing_ok(mut self, ok: bool) -> Self {
        self.any_missing_ok = ok;
        self
    }
}

/// What a matrix check requires.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixSpec {
    pub(crate) element_types: TypeSet,
    pub(crate) nrows: LengthConstraint,
    pub(crate) ncols: LengthConstraint,
    pub(crate) any_missing_ok: bool,
    pub(crate) row_names: NamesPolicy,
    pub(crate) col_names: NamesPolicy,
}

impl Default for MatrixSpec {
    fn default() -> Self {
        MatrixSpec {
            element_types: TypeSet::of(&[TypeTag::Bool, TypeTag::Int, TypeTag::Float, TypeTag::Str]),
            nrows: LengthConstraint::ANY,
            ncols: LengthConstraint::ANY,
            any_missing_ok: true,
            row_names: NamesPolicy::Any,
            col_names: NamesPolicy::Any,
        }
    }
}

impl MatrixSpec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn element_types(mut self, types: TypeSet) -> Result<Self, SpecError> {
        let allowed = TypeSet::of(&[TypeTag::Bool, TypeTag::Int, TypeTag::Float, TypeTag::Str]);
        if types.is_empty() || !types.is_subset(allowed) {
            return Err(SpecError::MatrixTypes(types));
        }
        self.element_types = types;
        Ok(self)
    }

    #[must_use]
    pub fn nrows(mut self, c: LengthConstraint) -> Self {
        self.nrows = c;
        self
    }

    #[must_use]
    pub fn ncols(mut self, c: LengthConstraint) -> Self {
        self.ncols = c;
        self
    }

    #[must_use]
    pub fn any_missing_ok(mut self, ok: bool) -> Self {
        self.any_missing_ok = ok;
        self
    }

    #[must_use]
    pub fn row_names(mut self, p: NamesPolicy) -> Self {
        self.row_names = p;
        self
    }

    #[must_use]
    pub fn col_names(mut self, p: NamesPolicy) -> Self {
        self.col_names = p;
        self
    }
}
