use crate::value::{Cells, MissingKind, Value};

use super::names::check_names;
use super::spec::{FrameSpec, MatrixSpec};
use super::{missing_found, type_mismatch, CheckOutcome};

fn first_missing(cells: Cells<'_>) -> Option<(usize, MissingKind)> {
    (0..cells.len()).find_map(|i| cells.missing_kind(i).map(|k| (i, k)))
}

/// Checks a frame's shape, required columns, column types and missingness.
pub fn check_frame(x: &Value, spec: &FrameSpec) -> CheckOutcome {
    frame(x, spec).into()
}

fn frame(x: &Value, spec: &FrameSpec) -> Result<(), String> {
    let Some(f) = x.as_frame() else {
        return Err(format!("Must be a Frame, but is of type '{}'", x.type_of()));
    };
    if let Some(m) = spec.ncols.violation("column count", f.ncol()) {
        return Err(m);
    }
    if let Some(m) = spec.nrows.violation("row count", f.nrow()) {
        return Err(m);
    }
    for name in &spec.required_columns {
        if f.column(name).is_none() {
            return Err(format!("Must include column '{name}', but it is absent"));
        }
    }
    for (name, types) in &spec.column_types {
        if let Some(col) = f.column(name) {
            if !types.contains(col.type_of()) {
                return Err(format!("Column '{name}': {}", type_mismatch(*types, col.type_of())));
            }
        }
    }
    if !spec.any_missing_ok {
        for (name, col) in f.columns() {
            if let Some((i, k)) = col.cells().and_then(first_missing) {
                return Err(format!("Column '{name}': {}", missing_found(k, i)));
            }
        }
    }
    Ok(())
}

/// Checks a matrix's element type, dimensions, dimension names and
/// missingness.
pub fn check_matrix(x: &Value, spec: &MatrixSpec) -> CheckOutcome {
    matrix(x, spec).into()
}

fn matrix(x: &Value, spec: &MatrixSpec) -> Result<(), String> {
    let Some(m) = x.as_matrix() else {
        return Err(format!("Must be a Matrix, but is of type '{}'", x.type_of()));
    };
    let tag = m.elements().type_tag();
    if !spec.element_types.contains(tag) {
        return Err(type_mismatch(spec.element_types, tag));
    }
    if let Some(msg) = spec.nrows.violation("row count", m.nrow()) {
        return Err(msg);
    }
    if let Some(msg) = spec.ncols.violation("column count", m.ncol()) {
        return Err(msg);
    }
    if let CheckOutcome::Fail(msg) = check_names(m.row_names(), spec.row_names) {
        return Err(format!("Row names: {msg}"));
    }
    if let CheckOutcome::Fail(msg) = check_names(m.col_names(), spec.col_names) {
        return Err(format!("Column names: {msg}"));
    }
    if !spec.any_missing_ok {
        if let Some((i, k)) = first_missing(m.elements().cells()) {
            return Err(missing_found(k, i));
        }
    }
    Ok(())
}
