//! The compact rule language.
//!
//! A rule is up to three parts written without spaces: a class letter
//! (lowercase permits missing values, uppercase forbids them), an optional
//! length code, and an optional numeric range in interval notation. For
//! example `N+[0,]` accepts non-empty numeric vectors without missing
//! values whose elements are all at least 0. See [`parser`] for the grammar.

mod eval;
pub mod parser;
mod rule;

use thiserror::Error;

use crate::engine::{CheckOutcome, LengthConstraint, VectorSpec, DEFAULT_TOLERANCE};
use crate::error::{Error, ValidationError};
use crate::value::{TypeSet, TypeTag, Value};

pub use eval::{eval_rule, eval_rule_probed};
pub use parser::{parse_rule, parse_rule_bytes};
pub use rule::{ClassCode, ClassSet, CmpOp, LengthCode, ParseError, Rule, RuleError};

/// `true` iff `x` satisfies `rule`. A malformed rule is an error.
pub fn qtest(x: &Value, rule: &str) -> Result<bool, ParseError> {
    Ok(eval_rule(x, &parse_rule(rule)?).is_ok())
}

/// Full outcome of evaluating `rule` against `x`.
pub fn qcheck(x: &Value, rule: &str) -> Result<CheckOutcome, ParseError> {
    Ok(eval_rule(x, &parse_rule(rule)?))
}

/// Returns `x` if it satisfies `rule`; labels failures as `x`.
pub fn qassert<'a>(x: &'a Value, rule: &str) -> Result<&'a Value, Error> {
    qassert_named(x, rule, "x")
}

/// [`qassert`] with an explicit label for the failure message.
pub fn qassert_named<'a>(x: &'a Value, rule: &str, label: &str) -> Result<&'a Value, Error> {
    match qcheck(x, rule)? {
        CheckOutcome::Ok => Ok(x),
        CheckOutcome::Fail(m) => Err(ValidationError::new(label, &m).into()),
    }
}

/// Why a rule has no equivalent [`VectorSpec`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("rule '{rule}' has no vector spec form: {reason}")]
pub struct Unrepresentable {
    pub rule: String,
    pub reason: &'static str,
}

/// Translates a rule into a structured spec with the same acceptance set.
///
/// Only single-code rules over `b i n d s f l x` translate; `a`, `v`, `0`,
/// multi-code rules and the unsatisfiable length `<0` do not.
pub fn rule_to_spec(rule: &Rule) -> Result<VectorSpec, Unrepresentable> {
    let fail = |reason| Unrepresentable {
        rule: rule.to_string(),
        reason,
    };
    let code = rule
        .class_codes()
        .only()
        .ok_or_else(|| fail("several class codes"))?;
    let (types, integerish) = match code {
        ClassCode::Bool => (TypeSet::single(TypeTag::Bool), false),
        ClassCode::Int => (TypeSet::single(TypeTag::Int), false),
        ClassCode::Numeric => (TypeSet::numeric(), false),
        ClassCode::Float => (TypeSet::single(TypeTag::Float), false),
        ClassCode::Str => (TypeSet::single(TypeTag::Str), false),
        ClassCode::Factor => (TypeSet::single(TypeTag::Factor), false),
        ClassCode::List => (TypeSet::single(TypeTag::List), false),
        ClassCode::Integerish => (TypeSet::of(&[TypeTag::Bool, TypeTag::Int, TypeTag::Float]), true),
        ClassCode::Atomic | ClassCode::AtomicVector | ClassCode::Null => {
            return Err(fail("class code has no vector type set"))
        }
    };
    let length = match rule.length() {
        LengthCode::Any => LengthConstraint::ANY,
        LengthCode::ZeroOrOne => LengthConstraint::max(1),
        LengthCode::AtLeastOne => LengthConstraint::min(1),
        LengthCode::Compare(op, k) => match op {
            CmpOp::Eq => LengthConstraint::exact(k),
            CmpOp::Le => LengthConstraint::max(k),
            CmpOp::Ge => LengthConstraint::min(k),
            CmpOp::Lt => LengthConstraint::max(k.checked_sub(1).ok_or_else(|| fail("length < 0 is unsatisfiable"))?),
            CmpOp::Gt => LengthConstraint::min(k.checked_add(1).ok_or_else(|| fail("length bound overflows"))?),
        },
    };
    let mut builder = VectorSpec::builder(types)
        .any_missing_ok(rule.missing_ok())
        .length(length)
        .maybe_bounds(rule.range());
    if integerish {
        builder = builder.integerish(DEFAULT_TOLERANCE);
    }
    Ok(builder.build().expect("rule invariants imply spec invariants"))
}
