use std::collections::HashSet;

use super::spec::NamesPolicy;
use super::CheckOutcome;

/// Words that can never be identifiers under [`NamesPolicy::Strict`].
pub const RESERVED_WORDS: [&str; 19] = [
    "if",
    "else",
    "repeat",
    "while",
    "function",
    "for",
    "in",
    "next",
    "break",
    "TRUE",
    "FALSE",
    "NULL",
    "Inf",
    "NaN",
    "NA",
    "NA_integer_",
    "NA_real_",
    "NA_character_",
    "NA_complex_",
];

/// First char in `[A-Za-z.]`, the rest in `[A-Za-z0-9._]`, not reserved.
pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    let Some(first) = chars.next() else {
        return false;
    };
    (first.is_ascii_alphabetic() || first == '.')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '.' || c == '_')
        && !RESERVED_WORDS.contains(&name)
}

/// Checks a names sequence against `policy`.
pub fn check_names(names: Option<&[Option<String>]>, policy: NamesPolicy) -> CheckOutcome {
    check(names, policy).into()
}

fn check(names: Option<&[Option<String>]>, policy: NamesPolicy) -> Result<(), String> {
    let names = match (policy, names) {
        (NamesPolicy::Any, _) => return Ok(()),
        (NamesPolicy::Unnamed, None) => return Ok(()),
        (NamesPolicy::Unnamed, Some(_)) => return Err("Must have no names, but has names".into()),
        (_, None) => return Err("Must have names, but has no names".into()),
        (_, Some(names)) => names,
    };
    let strict = policy == NamesPolicy::Strict;
    for (i, name) in names.iter().enumerate() {
        match name.as_deref() {
            None => {
                return Err(format!(
                    "Must have non-missing names, but name is missing (element {})",
                    i + 1
                ))
            }
            Some("") => {
                return Err(format!(
                    "Must have non-empty names, but name is empty (element {})",
                    i + 1
                ))
            }
            Some(n) if strict && !is_identifier(n) => {
                return Err(format!(
                    "Must have syntactically valid names, but '{n}' is not (element {})",
                    i + 1
                ))
            }
            Some(_) => {}
        }
    }
    if matches!(policy, NamesPolicy::Unique | NamesPolicy::Strict) {
        let mut seen = HashSet::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            let name = name.as_deref().unwrap_or_default();
            if !seen.insert(name) {
                return Err(format!(
                    "Must have unique names, but '{name}' is duplicated (element {})",
                    i + 1
                ));
            }
        }
    }
    Ok(())
}
