//! Recursive-descent parser for rule strings.
//!
//! ```text
//! rule   := class [length] [range]
//! class  := one of "bindsflavx0", lowercase or uppercase
//! length := "?" | "+" | [cmp] digits
//! cmp    := "==" | "<" | "<=" | ">" | ">="
//! range  := ("[" | "(") [number] "," [number] ("]" | ")")
//! number := ["-"] (digits ["." digits*] | "." digits) [("e"|"E") ["+"|"-"] digits]
//!         | "Inf" | "-Inf"
//! ```
//!
//! No whitespace is allowed anywhere.

use crate::engine::Bounds;

use super::rule::{ClassCode, ClassSet, CmpOp, LengthCode, ParseError, Rule};

/// Parses a rule string.
pub fn parse_rule(rule: &str) -> Result<Rule, ParseError> {
    parse_rule_bytes(rule.as_bytes())
}

/// Parses a rule from raw bytes. Total: any input yields a rule or an error.
pub fn parse_rule_bytes(input: &[u8]) -> Result<Rule, ParseError> {
    Parser { input, pos: 0 }.rule()
}

struct Parser<'a> {
    input: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<u8> {
        self.input.get(self.pos).copied()
    }

    fn found_at(&self, pos: usize) -> String {
        match self.input.get(pos..).and_then(|rest| rest.utf8_chunks().next()) {
            None => "end of input".into(),
            Some(chunk) => match chunk.valid().chars().next() {
                Some(c) => format!("'{c}'"),
                None => format!("byte 0x{:02X}", chunk.invalid()[0]),
            },
        }
    }

    fn error(&self, pos: usize, expected: &str) -> ParseError {
        ParseError {
            position: pos,
            expected: expected.into(),
            found: self.found_at(pos),
        }
    }

    fn rule(mut self) -> Result<Rule, ParseError> {
        let (code, missing_ok) = self.class()?;
        let length = self.length()?;
        let range = match self.peek() {
            Some(b'[' | b'(') if !code.is_numeric() => {
                return Err(self.error(self.pos, "end of rule (ranges need class i, n, d or x)"))
            }
            Some(b'[' | b'(') => Some(self.range()?),
            _ => None,
        };
        if self.pos < self.input.len() {
            return Err(self.error(self.pos, "end of rule"));
        }
        Ok(Rule::new(ClassSet::single(code), missing_ok, length, range)
            .expect("parser only builds valid rules"))
    }

    fn class(&mut self) -> Result<(ClassCode, bool), ParseError> {
        let c = self.peek();
        match c.and_then(ClassCode::from_letter) {
            Some(code) => {
                self.pos += 1;
                let missing_ok = code == ClassCode::Null || c.is_some_and(|c| c.is_ascii_lowercase());
                Ok((code, missing_ok))
            }
            None => Err(self.error(self.pos, "class code")),
        }
    }

    fn length(&mut self) -> Result<LengthCode, ParseError> {
        let op = match self.peek() {
            Some(b'?') => {
                self.pos += 1;
                return Ok(LengthCode::ZeroOrOne);
            }
            Some(b'+') => {
                self.pos += 1;
                return Ok(LengthCode::AtLeastOne);
            }
            Some(b'=') => {
                if self.input.get(self.pos + 1) != Some(&b'=') {
                    return Err(self.error(self.pos + 1, "'=' completing '=='"));
                }
                self.pos += 2;
                CmpOp::Eq
            }
            Some(b'<') => self.relational(CmpOp::Lt, CmpOp::Le),
            Some(b'>') => self.relational(CmpOp::Gt, CmpOp::Ge),
            Some(b'0'..=b'9') => CmpOp::Eq,
            _ => return Ok(LengthCode::Any),
        };
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error(start, "length digits"));
        }
        let digits = std::str::from_utf8(&self.input[start..self.pos]).expect("ascii digits");
        let n = digits.parse::<usize>().map_err(|_| ParseError {
            position: start,
            expected: "length that fits in a machine word".into(),
            found: format!("'{digits}'"),
        })?;
        Ok(LengthCode::Compare(op, n))
    }

    fn relational(&mut self, strict: CmpOp, inclusive: CmpOp) -> CmpOp {
        self.pos += 1;
        if self.peek() == Some(b'=') {
            self.pos += 1;
            inclusive
        } else {
            strict
        }
    }

    fn range(&mut self) -> Result<Bounds, ParseError> {
        let lower_closed = self.peek() == Some(b'[');
        self.pos += 1;
        let lower_pos = self.pos;
        let lower = self.endpoint()?;
        if self.peek() != Some(b',') {
            return Err(self.error(self.pos, "','"));
        }
        self.pos += 1;
        let upper = self.endpoint()?;
        let upper_closed = match self.peek() {
            Some(b']') => true,
            Some(b')') => false,
            _ => return Err(self.error(self.pos, "']' or ')'")),
        };
        self.pos += 1;
        // an infinite endpoint on its own side is the same as no endpoint
        let lower = lower.filter(|&l| l != f64::NEG_INFINITY);
        let upper = upper.filter(|&u| u != f64::INFINITY);
        Bounds::new(lower, lower_closed, upper, upper_closed).map_err(|_| ParseError {
            position: lower_pos,
            expected: "lower endpoint not above upper endpoint".into(),
            found: format!(
                "'{}'",
                String::from_utf8_lossy(&self.input[lower_pos..self.pos - 1])
            ),
        })
    }

    /// Optional number before `,` or the closing bracket.
    fn endpoint(&mut self) -> Result<Option<f64>, ParseError> {
        let start = self.pos;
        while self
            .peek()
            .is_some_and(|b| b.is_ascii_alphanumeric() || matches!(b, b'.' | b'+' | b'-'))
        {
            self.pos += 1;
        }
        if start == self.pos {
            return Ok(None);
        }
        let token = std::str::from_utf8(&self.input[start..self.pos]).expect("ascii token");
        match token {
            "Inf" => return Ok(Some(f64::INFINITY)),
            "-Inf" => return Ok(Some(f64::NEG_INFINITY)),
            _ => {}
        }
        if !is_decimal(token.as_bytes()) {
            return Err(ParseError {
                position: start,
                expected: "number".into(),
                found: format!("'{token}'"),
            });
        }
        let value: f64 = token.parse().map_err(|_| ParseError {
            position: start,
            expected: "number".into(),
            found: format!("'{token}'"),
        })?;
        Ok(Some(value))
    }
}

fn is_decimal(s: &[u8]) -> bool {
    let mut i = 0;
    let digits = |i: &mut usize| {
        let start = *i;
        while s.get(*i).is_some_and(u8::is_ascii_digit) {
            *i += 1;
        }
        *i - start
    };
    if s.first() == Some(&b'-') {
        i += 1;
    }
    let int_digits = digits(&mut i);
    let mut frac_digits = 0;
    if s.get(i) == Some(&b'.') {
        i += 1;
        frac_digits = digits(&mut i);
    }
    if int_digits + frac_digits == 0 {
        return false;
    }
    if matches!(s.get(i), Some(b'e' | b'E')) {
        i += 1;
        if matches!(s.get(i), Some(b'+' | b'-')) {
            i += 1;
        }
        if digits(&mut i) == 0 {
            return false;
        }
    }
    i == s.len()
}
