//! The dynamically-typed value universe checked by the engine.
//!
//! Values are immutable once constructed. Every element of an atomic payload
//! is either present or missing; floats encode missingness in the payload
//! itself (see [`FloatCells`]) so that scans run over a contiguous `f64`
//! slice.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

/// The base type of a [`Value`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TypeTag {
    Null,
    Bool,
    Int,
    Float,
    Str,
    Factor,
    List,
    Matrix,
    Frame,
}

impl TypeTag {
    pub const ALL: [TypeTag; 9] = [
        TypeTag::Null,
        TypeTag::Bool,
        TypeTag::Int,
        TypeTag::Float,
        TypeTag::Str,
        TypeTag::Factor,
        TypeTag::List,
        TypeTag::Matrix,
        TypeTag::Frame,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TypeTag::Null => "Null",
            TypeTag::Bool => "Bool",
            TypeTag::Int => "Int",
            TypeTag::Float => "Float",
            TypeTag::Str => "Str",
            TypeTag::Factor => "Factor",
            TypeTag::List => "List",
            TypeTag::Matrix => "Matrix",
            TypeTag::Frame => "Frame",
        }
    }

    fn bit(self) -> u16 {
        1 << (self as u16)
    }
}

impl fmt::Display for TypeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A small set of [`TypeTag`]s, stored as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct TypeSet(u16);

impl TypeSet {
    pub const EMPTY: TypeSet = TypeSet(0);

    pub fn of(tags: &[TypeTag]) -> Self {
        tags.iter().fold(TypeSet::EMPTY, |s, &t| s.with(t))
    }

    pub fn single(tag: TypeTag) -> Self {
        TypeSet(tag.bit())
    }

    /// `{Int, Float}`.
    pub fn numeric() -> Self {
        TypeSet::of(&[TypeTag::Int, TypeTag::Float])
    }

    #[must_use]
    pub fn with(self, tag: TypeTag) -> Self {
        TypeSet(self.0 | tag.bit())
    }

    pub fn contains(self, tag: TypeTag) -> bool {
        self.0 & tag.bit() != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: TypeSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = TypeTag> {
        TypeTag::ALL.into_iter().filter(move |t| self.contains(*t))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }
}

impl fmt::Debug for TypeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<TypeTag> for TypeSet {
    fn from_iter<I: IntoIterator<Item = TypeTag>>(iter: I) -> Self {
        iter.into_iter().fold(TypeSet::EMPTY, TypeSet::with)
    }
}

/// Why an element is missing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MissingKind {
    Absent,
    NaN,
}

impl fmt::Display for MissingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MissingKind::Absent => "NA",
            MissingKind::NaN => "NaN",
        })
    }
}

/// Bit pattern marking an absent float. Any other NaN is a [`MissingKind::NaN`].
const ABSENT_BITS: u64 = 0x7ff0_0000_0000_07a2;
const NAN_BITS: u64 = 0x7ff8_0000_0000_0000;

/// Float payload. Missing elements are NaN in the raw slice; the NaN payload
/// distinguishes an absent value from a NaN produced by arithmetic.
#[derive(Clone, Default)]
pub struct FloatCells(Vec<f64>);

impl FloatCells {
    pub fn from_options<I>(items: I) -> Self
    where
        I: IntoIterator,
        I::Item: Into<Option<f64>>,
    {
        FloatCells(
            items
                .into_iter()
                .map(|v| match v.into() {
                    None => f64::from_bits(ABSENT_BITS),
                    Some(x) if x.is_nan() => f64::from_bits(NAN_BITS),
                    Some(x) => x,
                })
                .collect(),
        )
    }

    /// Raw storage; missing elements read as NaN.
    #[inline]
    pub fn raw(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn get(&self, i: usize) -> Option<f64> {
        let v = self.0[i];
        if v.is_nan() {
            None
        } else {
            Some(v)
        }
    }

    pub fn missing_kind(&self, i: usize) -> Option<MissingKind> {
        missing_kind_of(self.0[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = Option<f64>> + '_ {
        self.0.iter().map(|&v| if v.is_nan() { None } else { Some(v) })
    }
}

/// Classifies a raw float cell.
#[inline]
pub fn missing_kind_of(v: f64) -> Option<MissingKind> {
    if !v.is_nan() {
        None
    } else if v.to_bits() == ABSENT_BITS {
        Some(MissingKind::Absent)
    } else {
        Some(MissingKind::NaN)
    }
}

impl PartialEq for FloatCells {
    fn eq(&self, other: &Self) -> bool {
        self.0.len() == other.0.len()
            && self
                .0
                .iter()
                .zip(&other.0)
                .all(|(a, b)| match (missing_kind_of(*a), missing_kind_of(*b)) {
                    (None, None) => a == b,
                    (ka, kb) => ka == kb,
                })
    }
}

impl fmt::Debug for FloatCells {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.0.iter().map(|&v| match missing_kind_of(v) {
                None => format!("{v:?}"),
                Some(k) => k.to_string(),
            }))
            .finish()
    }
}

/// Categorical vector: per-element level codes (0-based) into `levels`.
#[derive(Debug, Clone, PartialEq)]
pub struct Factor {
    codes: Vec<Option<usize>>,
    levels: Vec<String>,
}

impl Factor {
    pub fn codes(&self) -> &[Option<usize>] {
        &self.codes
    }

    pub fn levels(&self) -> &[String] {
        &self.levels
    }

    pub fn label(&self, i: usize) -> Option<&str> {
        self.codes[i].map(|c| self.levels[c].as_str())
    }
}

/// Homogeneous element payload of a matrix.
#[derive(Debug, Clone, PartialEq)]
pub enum Atomic {
    Bool(Vec<Option<bool>>),
    Int(Vec<Option<i64>>),
    Float(FloatCells),
    Str(Vec<Option<String>>),
}

impl Atomic {
    pub fn type_tag(&self) -> TypeTag {
        match self {
            Atomic::Bool(_) => TypeTag::Bool,
            Atomic::Int(_) => TypeTag::Int,
            Atomic::Float(_) => TypeTag::Float,
            Atomic::Str(_) => TypeTag::Str,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Atomic::Bool(v) => v.len(),
            Atomic::Int(v) => v.len(),
            Atomic::Float(v) => v.len(),
            Atomic::Str(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cells(&self) -> Cells<'_> {
        match self {
            Atomic::Bool(v) => Cells::Bool(v),
            Atomic::Int(v) => Cells::Int(v),
            Atomic::Float(v) => Cells::Float(v.raw()),
            Atomic::Str(v) => Cells::Str(v),
        }
    }
}

pub type Names = Vec<Option<String>>;

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    elements: Atomic,
    nrow: usize,
    ncol: usize,
    row_names: Option<Names>,
    col_names: Option<Names>,
}

impl Matrix {
    pub fn elements(&self) -> &Atomic {
        &self.elements
    }

    pub fn nrow(&self) -> usize {
        self.nrow
    }

    pub fn ncol(&self) -> usize {
        self.ncol
    }

    pub fn row_names(&self) -> Option<&[Option<String>]> {
        self.row_names.as_deref()
    }

    pub fn col_names(&self) -> Option<&[Option<String>]> {
        self.col_names.as_deref()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    columns: Vec<(String, Value)>,
    nrow: usize,
}

impl Frame {
    pub fn columns(&self) -> &[(String, Value)] {
        &self.columns
    }

    pub fn column(&self, name: &str) -> Option<&Value> {
        self.columns.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    pub fn nrow(&self) -> usize {
        self.nrow
    }

    pub fn ncol(&self) -> usize {
        self.columns.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Data {
    Null,
    Bool(Vec<Option<bool>>),
    Int(Vec<Option<i64>>),
    Float(FloatCells),
    Str(Vec<Option<String>>),
    Factor(Factor),
    List(Vec<Value>),
    Matrix(Matrix),
    Frame(Frame),
}

/// Borrowed view of the elements of a vector-like value.
#[derive(Clone, Copy)]
pub enum Cells<'a> {
    Bool(&'a [Option<bool>]),
    Int(&'a [Option<i64>]),
    /// Raw float storage, missing elements are NaN.
    Float(&'a [f64]),
    Str(&'a [Option<String>]),
    Factor(&'a Factor),
    /// List entries; a `Null` entry counts as missing.
    List(&'a [Value]),
}

impl Cells<'_> {
    pub fn len(&self) -> usize {
        match self {
            Cells::Bool(v) => v.len(),
            Cells::Int(v) => v.len(),
            Cells::Float(v) => v.len(),
            Cells::Str(v) => v.len(),
            Cells::Factor(f) => f.codes.len(),
            Cells::List(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn missing_kind(&self, i: usize) -> Option<MissingKind> {
        match self {
            Cells::Bool(v) => v[i].is_none().then_some(MissingKind::Absent),
            Cells::Int(v) => v[i].is_none().then_some(MissingKind::Absent),
            Cells::Float(v) => missing_kind_of(v[i]),
            Cells::Str(v) => v[i].is_none().then_some(MissingKind::Absent),
            Cells::Factor(f) => f.codes[i].is_none().then_some(MissingKind::Absent),
            Cells::List(v) => v[i].is_null().then_some(MissingKind::Absent),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValueError {
    #[error("names have length {names}, but the value has length {len}")]
    NamesLength { names: usize, len: usize },
    #[error("factor code {code} at element {index} does not index one of {levels} levels")]
    FactorCode {
        index: usize,
        code: usize,
        levels: usize,
    },
    #[error("factor level '{0}' is duplicated")]
    DuplicateLevel(String),
    #[error("matrix dimensions {nrow}x{ncol} do not match {len} elements")]
    MatrixDims { nrow: usize, ncol: usize, len: usize },
    #[error("matrix {which} names have length {got}, expected {expected}")]
    DimNames {
        which: &'static str,
        got: usize,
        expected: usize,
    },
    #[error("frame column '{name}' has length {got}, expected {expected}")]
    ColumnLength {
        name: String,
        got: usize,
        expected: usize,
    },
    #[error("frame column '{name}' has unsupported type {tag}")]
    ColumnType { name: String, tag: TypeTag },
    #[error("frame column name '{0}' is empty or duplicated")]
    ColumnName(String),
}

/// A dynamically-typed datum with optional element names.
#[derive(Debug, Clone, PartialEq)]
pub struct Value {
    data: Data,
    names: Option<Names>,
}

impl Value {
    pub fn null() -> Self {
        Value::from_data(Data::Null)
    }

    pub fn bool<I>(items: I) -> Self
    where
        I: IntoIterator,
        I::Item: Into<Option<bool>>,
    {
        Value::from_data(Data::Bool(items.into_iter().map(Into::into).collect()))
    }

    pub fn int<I>(items: I) -> Self
    where
        I: IntoIterator,
        I::Item: Into<Option<i64>>,
    {
        Value::from_data(Data::Int(items.into_iter().map(Into::into).collect()))
    }

    /// Builds a float vector. `None` becomes an absent element and a NaN
    /// payload becomes a missing element of kind [`MissingKind::NaN`].
    pub fn float<I>(items: I) -> Self
    where
        I: IntoIterator,
        I::Item: Into<Option<f64>>,
    {
        Value::from_data(Data::Float(FloatCells::from_options(items)))
    }

    pub fn str<I, S>(items: I) -> Self
    where
        I: IntoIterator<Item = Option<S>>,
        S: Into<String>,
    {
        Value::from_data(Data::Str(
            items.into_iter().map(|s| s.map(Into::into)).collect(),
        ))
    }

    /// Convenience for a string vector without missing elements.
    pub fn strs<I, S>(items: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Value::str(items.into_iter().map(Some))
    }

    pub fn list(items: Vec<Value>) -> Self {
        Value::from_data(Data::List(items))
    }

    pub fn factor(codes: Vec<Option<usize>>, levels: Vec<String>) -> Result<Self, ValueError> {
        let mut seen = HashSet::with_capacity(levels.len());
        for l in &levels {
            if !seen.insert(l.as_str()) {
                return Err(ValueError::DuplicateLevel(l.clone()));
            }
        }
        for (index, code) in codes.iter().enumerate() {
            if let Some(code) = *code {
                if code >= levels.len() {
                    return Err(ValueError::FactorCode {
                        index: index + 1,
                        code,
                        levels: levels.len(),
                    });
                }
            }
        }
        Ok(Value::from_data(Data::Factor(Factor { codes, levels })))
    }

    /// Builds a factor from labels, with levels in order of first appearance.
    pub fn factor_from_labels<'a, I>(labels: I) -> Self
    where
        I: IntoIterator<Item = Option<&'a str>>,
    {
        let mut levels: Vec<String> = Vec::new();
        let codes = labels
            .into_iter()
            .map(|l| {
                l.map(|l| match levels.iter().position(|x| x == l) {
                    Some(i) => i,
                    None => {
                        levels.push(l.to_owned());
                        levels.len() - 1
                    }
                })
            })
            .collect();
        Value::from_data(Data::Factor(Factor { codes, levels }))
    }

    /// Builds a matrix from column-major elements.
    pub fn matrix(
        elements: Atomic,
        nrow: usize,
        ncol: usize,
        row_names: Option<Names>,
        col_names: Option<Names>,
    ) -> Result<Self, ValueError> {
        if nrow.checked_mul(ncol) != Some(elements.len()) {
            return Err(ValueError::MatrixDims {
                nrow,
                ncol,
                len: elements.len(),
            });
        }
        for (which, names, expected) in [("row", &row_names, nrow), ("column", &col_names, ncol)] {
            if let Some(names) = names {
                if names.len() != expected {
                    return Err(ValueError::DimNames {
                        which,
                        got: names.len(),
                        expected,
                    });
                }
            }
        }
        Ok(Value::from_data(Data::Matrix(Matrix {
            elements,
            nrow,
            ncol,
            row_names,
            col_names,
        })))
    }

    pub fn frame(columns: Vec<(String, Value)>) -> Result<Self, ValueError> {
        let nrow = columns.first().map_or(0, |(_, c)| c.len());
        let mut seen = HashSet::with_capacity(columns.len());
        for (name, col) in &columns {
            if name.is_empty() || !seen.insert(name.as_str()) {
                return Err(ValueError::ColumnName(name.clone()));
            }
            match col.type_of() {
                TypeTag::Bool | TypeTag::Int | TypeTag::Float | TypeTag::Str | TypeTag::Factor => {}
                tag => {
                    return Err(ValueError::ColumnType {
                        name: name.clone(),
                        tag,
                    })
                }
            }
            if col.len() != nrow {
                return Err(ValueError::ColumnLength {
                    name: name.clone(),
                    got: col.len(),
                    expected: nrow,
                });
            }
        }
        Ok(Value::from_data(Data::Frame(Frame { columns, nrow })))
    }

    fn from_data(data: Data) -> Self {
        Value { data, names: None }
    }

    /// Attaches element names.
    pub fn with_names(mut self, names: Names) -> Result<Self, ValueError> {
        if names.len() != self.len() {
            return Err(ValueError::NamesLength {
                names: names.len(),
                len: self.len(),
            });
        }
        self.names = Some(names);
        Ok(self)
    }

    pub fn data(&self) -> &Data {
        &self.data
    }

    pub fn names(&self) -> Option<&[Option<String>]> {
        self.names.as_deref()
    }

    pub fn type_of(&self) -> TypeTag {
        match &self.data {
            Data::Null => TypeTag::Null,
            Data::Bool(_) => TypeTag::Bool,
            Data::Int(_) => TypeTag::Int,
            Data::Float(_) => TypeTag::Float,
            Data::Str(_) => TypeTag::Str,
            Data::Factor(_) => TypeTag::Factor,
            Data::List(_) => TypeTag::List,
            Data::Matrix(_) => TypeTag::Matrix,
            Data::Frame(_) => TypeTag::Frame,
        }
    }

    /// Element count; row count for frames, 0 for `Null`.
    pub fn len(&self) -> usize {
        match &self.data {
            Data::Null => 0,
            Data::Bool(v) => v.len(),
            Data::Int(v) => v.len(),
            Data::Float(v) => v.len(),
            Data::Str(v) => v.len(),
            Data::Factor(f) => f.codes.len(),
            Data::List(v) => v.len(),
            Data::Matrix(m) => m.elements.len(),
            Data::Frame(f) => f.nrow,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_null(&self) -> bool {
        matches!(self.data, Data::Null)
    }

    /// Element view for vectors, factors, lists and matrices.
    pub fn cells(&self) -> Option<Cells<'_>> {
        Some(match &self.data {
            Data::Bool(v) => Cells::Bool(v),
            Data::Int(v) => Cells::Int(v),
            Data::Float(v) => Cells::Float(v.raw()),
            Data::Str(v) => Cells::Str(v),
            Data::Factor(f) => Cells::Factor(f),
            Data::List(v) => Cells::List(v),
            Data::Matrix(m) => m.elements.cells(),
            Data::Null | Data::Frame(_) => return None,
        })
    }

    pub fn as_frame(&self) -> Option<&Frame> {
        match &self.data {
            Data::Frame(f) => Some(f),
            _ => None,
        }
    }

    pub fn as_matrix(&self) -> Option<&Matrix> {
        match &self.data {
            Data::Matrix(m) => Some(m),
            _ => None,
        }
    }
}

pub fn type_of(x: &Value) -> TypeTag {
    x.type_of()
}

pub fn length_of(x: &Value) -> usize {
    x.len()
}
