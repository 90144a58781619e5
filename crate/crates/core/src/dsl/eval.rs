use crate::engine::{fmt_num, integerish_is_ok, Bounds, CheckOutcome, FloatScan, NumberTest, ScanProbe, DEFAULT_TOLERANCE};
use crate::value::{missing_kind_of, Cells, MissingKind, Value};

use super::rule::{ClassCode, Rule};

/// Evaluates a compiled rule against `x`.
pub fn eval_rule(x: &Value, rule: &Rule) -> CheckOutcome {
    eval_rule_probed(x, rule, &mut ())
}

/// [`eval_rule`] reporting each element inspection to `probe`.
pub fn eval_rule_probed<P: ScanProbe>(x: &Value, rule: &Rule, probe: &mut P) -> CheckOutcome {
    eval(x, rule, probe).into()
}

fn eval<P: ScanProbe>(x: &Value, rule: &Rule, probe: &mut P) -> Result<(), String> {
    let tag = x.type_of();
    let mut matched = rule.class_codes().iter().filter(|c| c.matches(tag)).peekable();
    let Some(_) = matched.peek() else {
        let names: Vec<String> = rule
            .class_codes()
            .iter()
            .map(|c| format!("'{}'", c.describe()))
            .collect();
        return Err(format!("Must be of class {}, not '{tag}'", names.join(" or ")));
    };
    // integerish elements are only required when `x` is the sole match
    let integerish = matched.all(|c| c == ClassCode::Integerish);

    let n = x.len();
    if !rule.length().accepts(n) {
        return Err(format!(
            "Must have length {}, but has length {n}",
            rule.length().relation()
        ));
    }
    let Some(cells) = x.cells() else {
        return Ok(());
    };
    let range = rule.range();
    let check_missing = !rule.missing_ok();
    if !check_missing && range.is_none() && !integerish {
        return Ok(());
    }
    let check_number = |v: f64, i: usize, int_valued: bool| -> Result<(), String> {
        if let Some(r) = &range {
            if !r.contains(v) {
                return Err(range_violation(r, v, i));
            }
        }
        if integerish && !int_valued && !integerish_is_ok(v, DEFAULT_TOLERANCE) {
            return Err(format!(
                "Must be integerish, but is {} (element {})",
                fmt_num(v),
                i + 1
            ));
        }
        Ok(())
    };
    let missing = |k: MissingKind, i: usize| {
        format!("Must not contain missing values, but found {k} (element {})", i + 1)
    };
    match cells {
        Cells::Float(xs) => {
            let scan = FloatScan {
                test: NumberTest::new(range.as_ref(), integerish.then_some(DEFAULT_TOLERANCE)),
                any_missing_ok: !check_missing,
            };
            if let Err(i) = scan.run(xs, probe) {
                return match missing_kind_of(xs[i]) {
                    Some(k) => Err(missing(k, i)),
                    None => check_number(xs[i], i, false),
                };
            }
        }
        Cells::Int(xs) => {
            for (i, v) in xs.iter().enumerate() {
                probe.inspect(i);
                match v {
                    None if check_missing => return Err(missing(MissingKind::Absent, i)),
                    None => {}
                    Some(v) => check_number(*v as f64, i, true)?,
                }
            }
        }
        Cells::Bool(xs) => {
            for (i, v) in xs.iter().enumerate() {
                probe.inspect(i);
                match v {
                    None if check_missing => return Err(missing(MissingKind::Absent, i)),
                    None => {}
                    Some(b) => check_number(f64::from(u8::from(*b)), i, true)?,
                }
            }
        }
        other => {
            if check_missing {
                for i in 0..other.len() {
                    probe.inspect(i);
                    if let Some(k) = other.missing_kind(i) {
                        return Err(missing(k, i));
                    }
                }
            }
        }
    }
    Ok(())
}

fn range_violation(r: &Bounds, v: f64, i: usize) -> String {
    let m = r.violation(v).unwrap_or_else(|| format!("Must be in {r}, but is {}", fmt_num(v)));
    format!("{m} (element {})", i + 1)
}
