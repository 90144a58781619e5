use std::fmt;

use thiserror::Error;

use crate::engine::Bounds;
use crate::value::{TypeTag, Value};

/// First character of a rule: the accepted class of value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClassCode {
    /// `b`
    Bool,
    /// `i`
    Int,
    /// `n`: Int or Float.
    Numeric,
    /// `d`
    Float,
    /// `s`
    Str,
    /// `f`
    Factor,
    /// `l`
    List,
    /// `a`: any atomic value, including `Null`.
    Atomic,
    /// `v`: atomic vector, excluding `Null`.
    AtomicVector,
    /// `x`: Bool, Int, or Float with integer-valued elements.
    Integerish,
    /// `0`: exactly `Null`.
    Null,
}

impl ClassCode {
    pub const ALL: [ClassCode; 11] = [
        ClassCode::Bool,
        ClassCode::Int,
        ClassCode::Numeric,
        ClassCode::Float,
        ClassCode::Str,
        ClassCode::Factor,
        ClassCode::List,
        ClassCode::Atomic,
        ClassCode::AtomicVector,
        ClassCode::Integerish,
        ClassCode::Null,
    ];

    pub fn letter(self) -> char {
        match self {
            ClassCode::Bool => 'b',
            ClassCode::Int => 'i',
            ClassCode::Numeric => 'n',
            ClassCode::Float => 'd',
            ClassCode::Str => 's',
            ClassCode::Factor => 'f',
            ClassCode::List => 'l',
            ClassCode::Atomic => 'a',
            ClassCode::AtomicVector => 'v',
            ClassCode::Integerish => 'x',
            ClassCode::Null => '0',
        }
    }

    pub fn from_letter(c: u8) -> Option<ClassCode> {
        let lower = c.to_ascii_lowercase();
        ClassCode::ALL.into_iter().find(|code| code.letter() as u8 == lower)
    }

    pub fn describe(self) -> &'static str {
        match self {
            ClassCode::Bool => "Bool",
            ClassCode::Int => "Int",
            ClassCode::Numeric => "numeric",
            ClassCode::Float => "Float",
            ClassCode::Str => "Str",
            ClassCode::Factor => "Factor",
            ClassCode::List => "List",
            ClassCode::Atomic => "atomic",
            ClassCode::AtomicVector => "atomic vector",
            ClassCode::Integerish => "integerish",
            ClassCode::Null => "Null",
        }
    }

    /// Whether a range may follow this code.
    pub fn is_numeric(self) -> bool {
        matches!(
            self,
            ClassCode::Int | ClassCode::Numeric | ClassCode::Float | ClassCode::Integerish
        )
    }

    /// The type half of the class test; `x` additionally tests elements.
    pub fn matches(self, tag: TypeTag) -> bool {
        use TypeTag as T;
        match self {
            ClassCode::Bool => tag == T::Bool,
            ClassCode::Int => tag == T::Int,
            ClassCode::Numeric => matches!(tag, T::Int | T::Float),
            ClassCode::Float => tag == T::Float,
            ClassCode::Str => tag == T::Str,
            ClassCode::Factor => tag == T::Factor,
            ClassCode::List => tag == T::List,
            ClassCode::Atomic => matches!(
                tag,
                T::Null | T::Bool | T::Int | T::Float | T::Str | T::Factor | T::Matrix
            ),
            ClassCode::AtomicVector => {
                matches!(tag, T::Bool | T::Int | T::Float | T::Str | T::Factor | T::Matrix)
            }
            ClassCode::Integerish => matches!(tag, T::Bool | T::Int | T::Float),
            ClassCode::Null => tag == T::Null,
        }
    }
}

/// Non-empty set of class codes.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct ClassSet(u16);

impl ClassSet {
    pub fn single(code: ClassCode) -> Self {
        ClassSet(1 << code as u16)
    }

    pub fn of(codes: &[ClassCode]) -> Option<Self> {
        let bits = codes.iter().fold(0u16, |b, &c| b | 1 << c as u16);
        (bits != 0).then_some(ClassSet(bits))
    }

    pub fn contains(self, code: ClassCode) -> bool {
        self.0 & (1 << code as u16) != 0
    }

    pub fn iter(self) -> impl Iterator<Item = ClassCode> {
        ClassCode::ALL.into_iter().filter(move |c| self.contains(*c))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// The only member, if there is exactly one.
    pub fn only(self) -> Option<ClassCode> {
        (self.len() == 1).then(|| self.iter().next()).flatten()
    }
}

impl fmt::Debug for ClassSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Eq,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "==",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }

    pub fn holds(self, lhs: usize, rhs: usize) -> bool {
        match self {
            CmpOp::Eq => lhs == rhs,
            CmpOp::Lt => lhs < rhs,
            CmpOp::Le => lhs <= rhs,
            CmpOp::Gt => lhs > rhs,
            CmpOp::Ge => lhs >= rhs,
        }
    }
}

/// Second part of a rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum LengthCode {
    #[default]
    Any,
    /// `?`
    ZeroOrOne,
    /// `+`
    AtLeastOne,
    /// `k`, `==k`, `<k`, `<=k`, `>k`, `>=k`. A bare `k` is `==k`.
    Compare(CmpOp, usize),
}

impl LengthCode {
    pub fn accepts(self, n: usize) -> bool {
        match self {
            LengthCode::Any => true,
            LengthCode::ZeroOrOne => n <= 1,
            LengthCode::AtLeastOne => n >= 1,
            LengthCode::Compare(op, k) => op.holds(n, k),
        }
    }

    /// Relation text for messages, e.g. `<= 1`.
    pub(crate) fn relation(self) -> String {
        match self {
            LengthCode::Any => "any".into(),
            LengthCode::ZeroOrOne => "<= 1".into(),
            LengthCode::AtLeastOne => ">= 1".into(),
            LengthCode::Compare(CmpOp::Eq, k) => k.to_string(),
            LengthCode::Compare(op, k) => format!("{} {k}", op.symbol()),
        }
    }
}

impl fmt::Display for LengthCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LengthCode::Any => Ok(()),
            LengthCode::ZeroOrOne => f.write_str("?"),
            LengthCode::AtLeastOne => f.write_str("+"),
            LengthCode::Compare(CmpOp::Eq, k) => write!(f, "{k}"),
            LengthCode::Compare(op, k) => write!(f, "{}{k}", op.symbol()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("a rule needs at least one class code")]
    NoClassCodes,
    #[error("a range requires class codes i, n, d or x only")]
    RangeOnNonNumeric,
}

/// A compiled rule: accepted classes, missingness, length, optional range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rule {
    class_codes: ClassSet,
    missing_ok: bool,
    length: LengthCode,
    range: Option<Bounds>,
}

impl Rule {
    pub fn new(
        class_codes: ClassSet,
        missing_ok: bool,
        length: LengthCode,
        range: Option<Bounds>,
    ) -> Result<Self, RuleError> {
        if class_codes.is_empty() {
            return Err(RuleError::NoClassCodes);
        }
        if range.is_some() && !class_codes.iter().all(ClassCode::is_numeric) {
            return Err(RuleError::RangeOnNonNumeric);
        }
        Ok(Rule {
            class_codes,
            missing_ok,
            length,
            range,
        })
    }

    pub fn class_codes(&self) -> ClassSet {
        self.class_codes
    }

    pub fn missing_ok(&self) -> bool {
        self.missing_ok
    }

    pub fn length(&self) -> LengthCode {
        self.length
    }

    pub fn range(&self) -> Option<Bounds> {
        self.range
    }

    /// Shorthand for [`eval_rule`](super::eval_rule) as a predicate.
    pub fn test(&self, x: &Value) -> bool {
        super::eval_rule(x, self).is_ok()
    }
}

impl fmt::Display for Rule {
    /// Renders in rule syntax. Rules with several class codes have no
    /// single-string form; their letters are joined with `|`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letters: Vec<String> = self
            .class_codes
            .iter()
            .map(|c| {
                if self.missing_ok {
                    c.letter().to_string()
                } else {
                    c.letter().to_ascii_uppercase().to_string()
                }
            })
            .collect();
        f.write_str(&letters.join("|"))?;
        write!(f, "{}", self.length)?;
        if let Some(r) = &self.range {
            write!(f, "{r}")?;
        }
        Ok(())
    }
}

/// Where and why a rule string failed to parse.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("at position {position}: expected {expected}, found {found}")]
pub struct ParseError {
    /// 0-based byte offset.
    pub position: usize,
    pub expected: String,
    pub found: String,
}

impl ParseError {
    /// Two-line caret diagram pointing at the offending byte.
    pub fn diagram(&self, rule: &str) -> String {
        let pad: String = rule
            .char_indices()
            .take_while(|(i, _)| *i < self.position)
            .map(|_| ' ')
            .collect();
        format!("{rule}\n{pad}^ expected {}, found {}", self.expected, self.found)
    }
}
