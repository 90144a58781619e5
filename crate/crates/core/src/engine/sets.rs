use std::collections::HashSet;

use crate::value::{Cells, TypeSet, Value};

use super::{fmt_num, type_mismatch, CheckOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Key<'a> {
    Bool(bool),
    Int(i64),
    Float(u64),
    Str(&'a str),
}

impl Key<'_> {
    fn render(&self) -> String {
        match self {
            Key::Bool(b) => b.to_string(),
            Key::Int(n) => n.to_string(),
            Key::Float(bits) => fmt_num(f64::from_bits(*bits)),
            Key::Str(s) => format!("'{s}'"),
        }
    }
}

/// Present elements as hashable keys; `None` for missing. Factors compare
/// by label.
fn keys<'a>(x: &'a Value) -> Option<Box<dyn Iterator<Item = Option<Key<'a>>> + 'a>> {
    Some(match x.cells()? {
        Cells::Bool(v) => Box::new(v.iter().map(|e| e.map(Key::Bool))),
        Cells::Int(v) => Box::new(v.iter().map(|e| e.map(Key::Int))),
        Cells::Float(v) => Box::new(v.iter().map(|&f| {
            (!f.is_nan()).then(|| Key::Float(if f == 0.0 { 0 } else { f.to_bits() }))
        })),
        Cells::Str(v) => Box::new(v.iter().map(|e| e.as_deref().map(Key::Str))),
        Cells::Factor(f) => Box::new((0..f.codes().len()).map(move |i| f.label(i).map(Key::Str))),
        Cells::List(_) => return None,
    })
}

fn distinct<'a>(it: impl Iterator<Item = Option<Key<'a>>>) -> Vec<Key<'a>> {
    let mut seen = HashSet::new();
    it.flatten().filter(|k| seen.insert(*k)).collect()
}

fn render_set(keys: &[Key<'_>]) -> String {
    const SHOWN: usize = 10;
    let mut parts: Vec<String> = keys.iter().take(SHOWN).map(Key::render).collect();
    if keys.len() > SHOWN {
        parts.push("...".into());
    }
    format!("{{{}}}", parts.join(", "))
}

fn same_type(x: &Value, y: &Value) -> Result<(), String> {
    if x.type_of() != y.type_of() {
        return Err(type_mismatch(TypeSet::single(y.type_of()), x.type_of()));
    }
    Ok(())
}

fn atomic_keys<'a>(x: &'a Value) -> Result<Box<dyn Iterator<Item = Option<Key<'a>>> + 'a>, String> {
    keys(x).ok_or_else(|| format!("Must be an atomic vector, but is of type '{}'", x.type_of()))
}

/// Every present element of `x` occurs in `choices`.
pub fn check_subset(x: &Value, choices: &Value) -> CheckOutcome {
    subset(x, choices).into()
}

fn subset(x: &Value, choices: &Value) -> Result<(), String> {
    if x.is_empty() {
        return Ok(());
    }
    same_type(x, choices)?;
    let allowed = distinct(atomic_keys(choices)?);
    let lookup: HashSet<Key<'_>> = allowed.iter().copied().collect();
    for (i, k) in atomic_keys(x)?.enumerate() {
        if let Some(k) = k {
            if !lookup.contains(&k) {
                return Err(format!(
                    "Must be a subset of {}, but has additional element {} (element {})",
                    render_set(&allowed),
                    k.render(),
                    i + 1
                ));
            }
        }
    }
    Ok(())
}

/// `x` is a single present element of `choices`.
pub fn check_choice(x: &Value, choices: &Value) -> CheckOutcome {
    choice(x, choices).into()
}

fn choice(x: &Value, choices: &Value) -> Result<(), String> {
    same_type(x, choices)?;
    let mut xs = atomic_keys(x)?;
    if x.len() != 1 {
        return Err(format!("Must have length 1, but has length {}", x.len()));
    }
    let Some(k) = xs.next().flatten() else {
        return Err("Must not be missing, but is NA".into());
    };
    let allowed = distinct(atomic_keys(choices)?);
    if !allowed.contains(&k) {
        return Err(format!(
            "Must be element of set {}, but is {}",
            render_set(&allowed),
            k.render()
        ));
    }
    Ok(())
}

/// Distinct present elements of `x` and `y` coincide.
pub fn check_set_equal(x: &Value, y: &Value) -> CheckOutcome {
    set_equal(x, y).into()
}

fn set_equal(x: &Value, y: &Value) -> Result<(), String> {
    same_type(x, y)?;
    let xs = distinct(atomic_keys(x)?);
    let ys = distinct(atomic_keys(y)?);
    let x_set: HashSet<Key<'_>> = xs.iter().copied().collect();
    let y_set: HashSet<Key<'_>> = ys.iter().copied().collect();
    if let Some(k) = xs.iter().find(|k| !y_set.contains(k)) {
        return Err(format!(
            "Must be equal to set {}, but has extra element {}",
            render_set(&ys),
            k.render()
        ));
    }
    if let Some(k) = ys.iter().find(|k| !x_set.contains(k)) {
        return Err(format!(
            "Must be equal to set {}, but lacks {}",
            render_set(&ys),
            k.render()
        ));
    }
    Ok(())
}
