use crate::value::{Data, MissingKind, TypeSet, TypeTag, Value};

use super::spec::{ScalarKind, ScalarType};
use super::{fmt_num, integerish_is_ok, type_mismatch, CheckOutcome};

/// Checks that `x` holds exactly one element of the requested kind.
pub fn check_scalar(x: &Value, kind: &ScalarKind) -> CheckOutcome {
    check(x, kind).into()
}

fn allowed(ty: ScalarType) -> TypeSet {
    match ty {
        ScalarType::Flag => TypeSet::single(TypeTag::Bool),
        ScalarType::Int | ScalarType::Count | ScalarType::Number => TypeSet::numeric(),
        ScalarType::String => TypeSet::single(TypeTag::Str),
    }
}

enum Element {
    Missing(MissingKind),
    Number(f64),
    Other,
}

fn check(x: &Value, kind: &ScalarKind) -> Result<(), String> {
    let types = allowed(kind.ty);
    let tag = x.type_of();
    if !types.contains(tag) {
        return Err(type_mismatch(types, tag));
    }
    if x.len() != 1 {
        return Err(format!("Must have length 1, but has length {}", x.len()));
    }
    let elem = match x.data() {
        Data::Bool(v) => v[0].map_or(Element::Missing(MissingKind::Absent), |_| Element::Other),
        Data::Str(v) => v[0].as_ref().map_or(Element::Missing(MissingKind::Absent), |_| Element::Other),
        Data::Int(v) => v[0].map_or(Element::Missing(MissingKind::Absent), |n| Element::Number(n as f64)),
        Data::Float(v) => match v.missing_kind(0) {
            Some(k) => Element::Missing(k),
            None => Element::Number(v.raw()[0]),
        },
        _ => unreachable!("type already checked"),
    };
    let v = match elem {
        Element::Missing(_) if kind.na_ok => return Ok(()),
        Element::Missing(k) => return Err(format!("Must not be missing, but is {k}")),
        Element::Other => return Ok(()),
        Element::Number(v) => v,
    };
    let is_int = tag == TypeTag::Int;
    if matches!(kind.ty, ScalarType::Int | ScalarType::Count) && !is_int && !integerish_is_ok(v, kind.tolerance) {
        return Err(format!("Must be integerish, but is {}", fmt_num(v)));
    }
    if kind.ty == ScalarType::Count {
        let min = if kind.positive { 1.0 } else { 0.0 };
        // integerish tolerance may leave v slightly below the integer
        if v.round() < min {
            return Err(format!("Must be >= {min}, but is {}", fmt_num(v)));
        }
    }
    if let Some(b) = kind.bounds {
        if let Some(m) = b.violation(v) {
            return Err(m);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Bounds;

    #[test]
    fn flag() {
        assert!(check_scalar(&Value::bool([true]), &ScalarKind::flag()).is_ok());
        assert!(check_scalar(&Value::bool([true, false]), &ScalarKind::flag()).is_fail());
        assert_eq!(
            check_scalar(&Value::int([1]), &ScalarKind::flag()).message(),
            Some("Must be of type 'Bool', not 'Int'")
        );
    }

    #[test]
    fn flag_missing_respects_na_ok() {
        let na = Value::bool([None]);
        assert_eq!(
            check_scalar(&na, &ScalarKind::flag()).message(),
            Some("Must not be missing, but is NA")
        );
        assert!(check_scalar(&na, &ScalarKind::flag().na_ok(true)).is_ok());
    }

    #[test]
    fn count_non_negative() {
        assert!(check_scalar(&Value::float([3.0]), &ScalarKind::count()).is_ok());
        assert_eq!(
            check_scalar(&Value::float([-1.0]), &ScalarKind::count()).message(),
            Some("Must be >= 0, but is -1")
        );
        assert!(check_scalar(&Value::int([0]), &ScalarKind::count()).is_ok());
        assert!(check_scalar(&Value::int([0]), &ScalarKind::count().positive(true)).is_fail());
        assert!(check_scalar(&Value::float([2.5]), &ScalarKind::count()).is_fail());
        assert!(check_scalar(&Value::float([-1e-12]), &ScalarKind::count()).is_ok());
    }

    #[test]
    fn int_and_number() {
        assert!(check_scalar(&Value::float([2.0]), &ScalarKind::int()).is_ok());
        assert!(check_scalar(&Value::int([i64::MAX]), &ScalarKind::int()).is_ok());
        assert!(check_scalar(&Value::float([2.5]), &ScalarKind::number()).is_ok());
        assert!(check_scalar(&Value::float([f64::NAN]), &ScalarKind::number()).is_fail());
        let bounded = ScalarKind::number().with_bounds(Bounds::closed(Some(0.0), Some(1.0)).unwrap()).unwrap();
        assert_eq!(
            check_scalar(&Value::float([2.0]), &bounded).message(),
            Some("Must be <= 1, but is 2")
        );
        assert!(ScalarKind::flag().with_bounds(Bounds::at_least(0.0)).is_err());
    }

    #[test]
    fn string() {
        assert!(check_scalar(&Value::strs(["a"]), &ScalarKind::string()).is_ok());
        assert_eq!(
            check_scalar(&Value::int([1]), &ScalarKind::string()).message(),
            Some("Must be of type 'Str', not 'Int'")
        );
        assert_eq!(
            check_scalar(&Value::strs(Vec::<String>::new()), &ScalarKind::string()).message(),
            Some("Must have length 1, but has length 0")
        );
    }
}
