//! Text ingestion: typed columns from text cells and a small RFC 4180 reader.

use thiserror::Error;

use crate::value::{TypeTag, Value, ValueError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IngestError {
    #[error("type hint must be one of Bool, Int, Float or Str, not {0}")]
    BadHint(TypeTag),
    #[error("cell {index}: cannot parse '{text}' as {tag}")]
    Cell {
        /// 1-based cell index.
        index: usize,
        text: String,
        tag: TypeTag,
    },
    #[error("line {line}: {message}")]
    Csv { line: usize, message: String },
    #[error(transparent)]
    Value(#[from] ValueError),
}

fn is_missing_text(s: &str) -> bool {
    s.is_empty() || s == "NA"
}

pub fn parse_bool(s: &str) -> Option<bool> {
    match s {
        "true" | "TRUE" | "True" => Some(true),
        "false" | "FALSE" | "False" => Some(false),
        _ => None,
    }
}

pub fn parse_int(s: &str) -> Option<i64> {
    s.parse().ok()
}

pub fn parse_float(s: &str) -> Option<f64> {
    match s {
        "Inf" => Some(f64::INFINITY),
        "-Inf" => Some(f64::NEG_INFINITY),
        _ => s.parse().ok(),
    }
}

fn parses_as(tag: TypeTag, s: &str) -> bool {
    match tag {
        TypeTag::Bool => parse_bool(s).is_some(),
        TypeTag::Int => parse_int(s).is_some(),
        TypeTag::Float => parse_float(s).is_some(),
        _ => true,
    }
}

/// Narrowest of Bool, Int, Float, Str that parses every present cell.
pub fn infer_tag<'a, I>(cells: I) -> TypeTag
where
    I: IntoIterator<Item = Option<&'a str>>,
    I::IntoIter: Clone,
{
    let cells = cells.into_iter().flatten();
    [TypeTag::Bool, TypeTag::Int, TypeTag::Float]
        .into_iter()
        .find(|&t| cells.clone().all(|c| parses_as(t, c)))
        .unwrap_or(TypeTag::Str)
}

/// Builds a vector from cells that are already split into present and
/// missing. With no hint the narrowest fitting tag is inferred.
pub fn parse_cells(cells: &[Option<&str>], hint: Option<TypeTag>) -> Result<Value, IngestError> {
    let tag = match hint {
        Some(t @ (TypeTag::Bool | TypeTag::Int | TypeTag::Float | TypeTag::Str)) => t,
        Some(other) => return Err(IngestError::BadHint(other)),
        None => infer_tag(cells.iter().copied()),
    };
    fn convert<T>(
        cells: &[Option<&str>],
        tag: TypeTag,
        f: impl Fn(&str) -> Option<T>,
    ) -> Result<Vec<Option<T>>, IngestError> {
        cells
            .iter()
            .enumerate()
            .map(|(i, c)| match c {
                None => Ok(None),
                Some(s) => f(s).map(Some).ok_or_else(|| IngestError::Cell {
                    index: i + 1,
                    text: (*s).to_owned(),
                    tag,
                }),
            })
            .collect()
    }
    Ok(match tag {
        TypeTag::Bool => Value::bool(convert(cells, tag, parse_bool)?),
        TypeTag::Int => Value::int(convert(cells, tag, parse_int)?),
        TypeTag::Float => Value::float(convert(cells, tag, parse_float)?),
        _ => Value::str(cells.iter().map(|c| c.map(str::to_owned))),
    })
}

/// Builds a vector from text cells; empty cells and `NA` are missing.
pub fn parse_column<S: AsRef<str>>(cells: &[S], hint: Option<TypeTag>) -> Result<Value, IngestError> {
    let cells: Vec<Option<&str>> = cells
        .iter()
        .map(|c| Some(c.as_ref()).filter(|s| !is_missing_text(s)))
        .collect();
    parse_cells(&cells, hint)
}

/// Renders the elements of an atomic vector as text cells that
/// [`parse_column`] reads back; missing elements become `NA`.
pub fn render_cells(x: &Value) -> Option<Vec<String>> {
    use crate::value::Data;
    let na = || "NA".to_owned();
    Some(match x.data() {
        Data::Bool(v) => v.iter().map(|e| e.map_or_else(na, |b| b.to_string())).collect(),
        Data::Int(v) => v.iter().map(|e| e.map_or_else(na, |n| n.to_string())).collect(),
        Data::Float(v) => v.iter().map(|e| e.map_or_else(na, |f| f.to_string())).collect(),
        Data::Str(v) => v.iter().map(|e| e.clone().unwrap_or_else(na)).collect(),
        _ => return None,
    })
}

/// One parsed CSV field. `None` marks a missing field.
pub type Field = Option<String>;

/// Parsed CSV document: header plus rows of fields.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Field>>,
}

/// Reads RFC 4180 CSV. The first record is the header. An empty field or an
/// unquoted `NA` is missing; a quoted `"NA"` or `""` is present text.
pub fn read_csv(text: &str) -> Result<Table, IngestError> {
    let mut records = CsvReader::new(text);
    let header = match records.next_record()? {
        Some(h) => h.into_iter().map(|(s, _)| s).collect::<Vec<_>>(),
        None => {
            return Err(IngestError::Csv {
                line: 1,
                message: "missing header row".into(),
            })
        }
    };
    let mut rows = Vec::new();
    while let Some(rec) = records.next_record()? {
        if rec.len() != header.len() {
            return Err(IngestError::Csv {
                line: records.record_line,
                message: format!("expected {} fields, found {}", header.len(), rec.len()),
            });
        }
        rows.push(
            rec.into_iter()
                .map(|(s, quoted)| if !quoted && is_missing_text(&s) { None } else { Some(s) })
                .collect(),
        );
    }
    Ok(Table { header, rows })
}

/// Builds a frame from a table, inferring each column type.
pub fn table_to_frame(table: &Table) -> Result<Value, IngestError> {
    let columns = (0..table.header.len())
        .map(|j| {
            let cells: Vec<Option<&str>> = table.rows.iter().map(|r| r[j].as_deref()).collect();
            Ok((table.header[j].clone(), parse_cells(&cells, None)?))
        })
        .collect::<Result<Vec<_>, IngestError>>()?;
    Ok(Value::frame(columns)?)
}

struct CsvReader<'a> {
    bytes: &'a [u8],
    text: &'a str,
    pos: usize,
    line: usize,
    record_line: usize,
}

impl<'a> CsvReader<'a> {
    fn new(text: &'a str) -> Self {
        let text = text.strip_prefix('\u{feff}').unwrap_or(text);
        CsvReader {
            bytes: text.as_bytes(),
            text,
            pos: 0,
            line: 1,
            record_line: 1,
        }
    }

    fn err(&self, message: &str) -> IngestError {
        IngestError::Csv {
            line: self.line,
            message: message.into(),
        }
    }

    /// Next record as (field, was_quoted) pairs; `None` at end of input.
    fn next_record(&mut self) -> Result<Option<Vec<(String, bool)>>, IngestError> {
        // Trailing line breaks end the document; an inner blank line is a
        // record with one empty field.
        if self.bytes[self.pos..].iter().all(|b| matches!(b, b'\n' | b'\r')) {
            return Ok(None);
        }
        self.record_line = self.line;
        let mut fields = Vec::new();
        loop {
            let field = self.field()?;
            fields.push(field);
            match self.bytes.get(self.pos) {
                Some(b',') => self.pos += 1,
                Some(b'\r') | Some(b'\n') | None => {
                    if self.bytes.get(self.pos) == Some(&b'\r') {
                        self.pos += 1;
                    }
                    if self.bytes.get(self.pos) == Some(&b'\n') {
                        self.pos += 1;
                        self.line += 1;
                    }
                    return Ok(Some(fields));
                }
                Some(_) => return Err(self.err("unexpected character after closing quote")),
            }
        }
    }

    fn field(&mut self) -> Result<(String, bool), IngestError> {
        if self.bytes.get(self.pos) != Some(&b'"') {
            let start = self.pos;
            while self.pos < self.bytes.len() && !matches!(self.bytes[self.pos], b',' | b'\r' | b'\n') {
                if self.bytes[self.pos] == b'"' {
                    return Err(self.err("quote inside unquoted field"));
                }
                self.pos += 1;
            }
            return Ok((self.text[start..self.pos].to_owned(), false));
        }
        self.pos += 1;
        let mut out = String::new();
        loop {
            let start = self.pos;
            while self.pos < self.bytes.len() && self.bytes[self.pos] != b'"' {
                if self.bytes[self.pos] == b'\n' {
                    self.line += 1;
                }
                self.pos += 1;
            }
            out.push_str(&self.text[start..self.pos]);
            if self.pos >= self.bytes.len() {
                return Err(self.err("unterminated quoted field"));
            }
            self.pos += 1;
            if self.bytes.get(self.pos) == Some(&b'"') {
                out.push('"');
                self.pos += 1;
            } else {
                return Ok((out, true));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infers_int_with_missing() {
        assert_eq!(
            parse_column(&["1", "2", ""], None).unwrap(),
            Value::int([Some(1), Some(2), None])
        );
    }

    #[test]
    fn infers_float_with_na() {
        assert_eq!(
            parse_column(&["1.5", "NA"], None).unwrap(),
            Value::float([Some(1.5), None])
        );
    }

    #[test]
    fn hinted_parse_names_bad_cell() {
        let err = parse_column(&["1", "x"], Some(TypeTag::Int)).unwrap_err();
        assert_eq!(
            err,
            IngestError::Cell {
                index: 2,
                text: "x".into(),
                tag: TypeTag::Int
            }
        );
        assert!(err.to_string().contains("cell 2") && err.to_string().contains("'x'"));
    }

    #[test]
    fn mixed_bool_and_number_cells_are_text() {
        assert_eq!(infer_tag([Some("TRUE"), Some("1")]), TypeTag::Str);
        assert_eq!(infer_tag([Some("1"), Some("TRUE")]), TypeTag::Str);
        assert_eq!(infer_tag([Some("1"), None, Some("2.5")]), TypeTag::Float);
    }

    #[test]
    fn inference_order() {
        assert_eq!(infer_tag([Some("true"), None]), TypeTag::Bool);
        assert_eq!(infer_tag([Some("1"), Some("-2")]), TypeTag::Int);
        assert_eq!(infer_tag([Some("1"), Some("2.5")]), TypeTag::Float);
        assert_eq!(infer_tag([Some("1"), Some("true")]), TypeTag::Str);
        assert_eq!(infer_tag([None, None]), TypeTag::Bool);
        assert_eq!(infer_tag([Some("Inf")]), TypeTag::Float);
    }

    #[test]
    fn bad_hint() {
        assert!(matches!(parse_column(&["1"], Some(TypeTag::List)), Err(IngestError::BadHint(_))));
    }

    #[test]
    fn csv_quoting() {
        let t = read_csv("a,b\r\n\"x,1\",NA\n\"NA\",\"\"\n,\"say \"\"hi\"\"\"\n").unwrap();
        assert_eq!(t.header, ["a", "b"]);
        assert_eq!(t.rows[0], [Some("x,1".into()), None]);
        assert_eq!(t.rows[1], [Some("NA".into()), Some("".into())]);
        assert_eq!(t.rows[2], [None, Some("say \"hi\"".into())]);
    }

    #[test]
    fn csv_errors() {
        assert!(read_csv("").is_err());
        assert!(matches!(read_csv("a,b\n1\n"), Err(IngestError::Csv { line: 2, .. })));
        assert!(read_csv("a\n\"open\n").is_err());
        assert!(read_csv("a\nx\"y\n").is_err());
        let t = read_csv("a\n1\n\n2\n\n").unwrap();
        assert_eq!(t.rows, [[Some("1".to_string())], [None], [Some("2".to_string())]]);
    }

    #[test]
    fn table_to_frame_infers_columns() {
        let t = read_csv("age,name\n30,ann\n,bob\n").unwrap();
        let f = table_to_frame(&t).unwrap();
        let frame = f.as_frame().unwrap();
        assert_eq!(frame.column("age").unwrap(), &Value::int([Some(30), None]));
        assert_eq!(frame.column("name").unwrap(), &Value::strs(["ann", "bob"]));
        assert!(table_to_frame(&read_csv("a,a\n1,2\n").unwrap()).is_err());
    }
}
