//! Column schemas for tabular data and the report produced by validating
//! a table against one.
//!
//! A schema file maps column names to rule strings, one per line:
//!
//! ```text
//! # ages must be known and non-negative
//! age = "N+[0,]"
//! name = "S"
//! ```

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::dsl::{eval_rule, parse_rule, ClassCode, ParseError, Rule};
use crate::engine::CheckOutcome;
use crate::ingest::{parse_cells, Table};
use crate::value::{Data, TypeTag, Value};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SchemaError {
    #[error("schema syntax: {0}")]
    Syntax(String),
    #[error("schema entry '{0}' must be a rule string")]
    NotARule(String),
    #[error("column '{column}': invalid rule {error}\n{diagram}")]
    Rule {
        column: String,
        error: ParseError,
        diagram: String,
    },
}

/// Column rules in file order, with the policies for unmatched columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Schema {
    pub columns: Vec<(String, Rule)>,
    /// Data columns absent from the schema are ignored when true.
    pub allow_extra_columns: bool,
    /// Every schema column must appear in the data when true.
    pub required_all: bool,
}

impl Schema {
    pub fn new(columns: Vec<(String, Rule)>) -> Self {
        Schema {
            columns,
            allow_extra_columns: true,
            required_all: true,
        }
    }

    /// Parses `name = "rule"` lines. Duplicate names and malformed rules are
    /// rejected here, before any data is read.
    pub fn parse(text: &str) -> Result<Schema, SchemaError> {
        let table: toml::Table = text.parse().map_err(|e: toml::de::Error| {
            SchemaError::Syntax(e.message().to_owned())
        })?;
        let mut columns = Vec::with_capacity(table.len());
        for (name, value) in table {
            let Some(rule) = value.as_str() else {
                return Err(SchemaError::NotARule(name));
            };
            let parsed = parse_rule(rule).map_err(|error| SchemaError::Rule {
                column: name.clone(),
                diagram: error.diagram(rule),
                error,
            })?;
            columns.push((name, parsed));
        }
        Ok(Schema::new(columns))
    }
}

/// One failing column.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ColumnFailure {
    pub column: String,
    pub message: String,
}

/// Result of validating one file. Serializes with fields in declaration
/// order: `file`, `checked_columns`, `failures`, `passed`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub file: String,
    pub checked_columns: usize,
    pub failures: Vec<ColumnFailure>,
    pub passed: bool,
}

impl ValidationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Human-readable report; `color` wraps the verdict in ANSI codes.
    pub fn render_text(&self, color: bool) -> String {
        let paint = |code: &str, s: &str| {
            if color {
                format!("\x1b[{code}m{s}\x1b[0m")
            } else {
                s.to_owned()
            }
        };
        let mut out = if self.passed {
            format!(
                "{}: {} ({} columns checked)\n",
                self.file,
                paint("32", "OK"),
                self.checked_columns
            )
        } else {
            format!(
                "{}: {} ({} of {} columns failed)\n",
                self.file,
                paint("31", "FAILED"),
                self.failures.len(),
                self.checked_columns
            )
        };
        for f in &self.failures {
            out.push_str(&format!("  {}: {}\n", f.column, f.message));
        }
        out
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_text(false))
    }
}

/// The cell type a rule expects, when it names exactly one.
fn hint_for(rule: &Rule) -> Option<TypeTag> {
    match rule.class_codes().only()? {
        ClassCode::Bool => Some(TypeTag::Bool),
        ClassCode::Int => Some(TypeTag::Int),
        ClassCode::Float => Some(TypeTag::Float),
        ClassCode::Str | ClassCode::Factor => Some(TypeTag::Str),
        _ => None,
    }
}

/// Builds the column value a rule is evaluated against. Cells that do not
/// parse under the rule's type fall back to inference, so the rule then
/// reports the type mismatch.
pub fn column_value(cells: &[Option<&str>], rule: &Rule) -> Value {
    let value = parse_cells(cells, hint_for(rule))
        .or_else(|_| parse_cells(cells, None))
        .expect("inference always succeeds");
    if rule.class_codes().only() == Some(ClassCode::Factor) {
        if let Data::Str(v) = value.data() {
            return Value::factor_from_labels(v.iter().map(|s| s.as_deref()));
        }
    }
    value
}

/// Evaluates every schema rule against its column. Failures are listed in
/// schema order, followed by unexpected columns when those are disallowed.
pub fn validate(schema: &Schema, table: &Table, file: &str) -> ValidationReport {
    let mut failures = Vec::new();
    let mut checked = 0;
    for (name, rule) in &schema.columns {
        let Some(j) = table.header.iter().position(|h| h == name) else {
            if schema.required_all {
                failures.push(ColumnFailure {
                    column: name.clone(),
                    message: "Must be present in the data, but the column is absent".into(),
                });
            }
            continue;
        };
        checked += 1;
        let cells: Vec<Option<&str>> = table.rows.iter().map(|r| r[j].as_deref()).collect();
        if let CheckOutcome::Fail(message) = eval_rule(&column_value(&cells, rule), rule) {
            failures.push(ColumnFailure {
                column: name.clone(),
                message,
            });
        }
    }
    if !schema.allow_extra_columns {
        for h in &table.header {
            if !schema.columns.iter().any(|(name, _)| name == h) {
                failures.push(ColumnFailure {
                    column: h.clone(),
                    message: "Must not be present, but the column is not in the schema".into(),
                });
            }
        }
    }
    ValidationReport {
        file: file.to_owned(),
        checked_columns: checked,
        passed: failures.is_empty(),
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::read_csv;

    fn age_schema() -> Schema {
        Schema::parse("age = \"N+[0,]\"\n").unwrap()
    }

    #[test]
    fn parses_in_file_order() {
        let s = Schema::parse("# c\nz = \"s\"\na = \"n\"\n").unwrap();
        let names: Vec<&str> = s.columns.iter().map(|(n, _)| n.as_str()).collect();
        assert_eq!(names, ["z", "a"]);
        assert!(s.allow_extra_columns && s.required_all);
    }

    #[test]
    fn rejects_bad_schemas() {
        assert!(matches!(Schema::parse("a = \"s\"\na = \"n\"\n"), Err(SchemaError::Syntax(_))));
        assert!(matches!(Schema::parse("a = 1\n"), Err(SchemaError::NotARule(_))));
        match Schema::parse("a = \"Q+\"\n") {
            Err(SchemaError::Rule { error, .. }) => assert_eq!(error.position, 0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn passing_ages() {
        let t = read_csv("age\n30\n41\n").unwrap();
        let r = validate(&age_schema(), &t, "d.csv");
        assert!(r.passed);
        assert_eq!(r.checked_columns, 1);
    }

    #[test]
    fn empty_age_cell_fails_with_index() {
        let t = read_csv("age,name\n30,a\n,b\n").unwrap();
        let r = validate(&age_schema(), &t, "d.csv");
        assert!(!r.passed);
        assert_eq!(
            r.failures,
            [ColumnFailure {
                column: "age".into(),
                message: "Must not contain missing values, but found NA (element 2)".into()
            }]
        );
    }

    #[test]
    fn missing_and_extra_columns() {
        let t = read_csv("name\nx\n").unwrap();
        let mut s = age_schema();
        let r = validate(&s, &t, "d.csv");
        assert_eq!(r.failures[0].column, "age");
        assert_eq!(r.checked_columns, 0);
        s.allow_extra_columns = false;
        s.required_all = false;
        let r = validate(&s, &t, "d.csv");
        assert_eq!(r.failures.len(), 1);
        assert_eq!(r.failures[0].column, "name");
    }

    #[test]
    fn rule_types_guide_parsing() {
        let t = read_csv("id,score,level\n1,2,lo\n2,3,hi\n").unwrap();
        let s = Schema::parse("id = \"S\"\nscore = \"D\"\nlevel = \"F\"\n").unwrap();
        assert!(validate(&s, &t, "d.csv").passed);
        let s = Schema::parse("level = \"d\"\n").unwrap();
        assert_eq!(
            validate(&s, &t, "d.csv").failures[0].message,
            "Must be of class 'Float', not 'Str'"
        );
    }

    #[test]
    fn json_field_order() {
        let t = read_csv("age\n-1\n").unwrap();
        let json = validate(&age_schema(), &t, "d.csv").to_json();
        let keys: Vec<usize> = ["\"file\"", "\"checked_columns\"", "\"failures\"", "\"passed\""]
            .iter()
            .map(|k| json.find(k).unwrap())
            .collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]), "{json}");
    }
}
