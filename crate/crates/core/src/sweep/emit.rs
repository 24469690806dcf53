//! CSV and JSON writers for sweep grids.
//!
//! Floats use Rust's shortest round-trip formatting, so parsing a field back
//! yields the same bits. NaN marks failed or not-applicable fields in CSV
//! and `null` in JSON.

use std::fmt::Write as _;

use serde_json::{json, Map, Value};

use super::config::{OutputFormat, SCHEMA_VERSION};
use super::run::SweepGrid;

fn field(x: f64) -> String {
    format!("{x}")
}

fn number(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

/// Header `axis1,axis2,<measures>,residual,truncation_delta`, then one row
/// per cell in row-major axis order.
pub fn emit_csv(grid: &SweepGrid) -> String {
    let mut out = String::from("axis1,axis2");
    for c in &grid.columns {
        out.push(',');
        out.push_str(c);
    }
    out.push_str(",residual,truncation_delta\n");
    for cell in &grid.cells {
        let mut row = vec![field(cell.axis1), field(cell.axis2)];
        row.extend(cell.values.iter().map(|&v| field(v)));
        row.push(field(cell.residual));
        row.push(field(cell.truncation_delta.unwrap_or(f64::NAN)));
        let _ = writeln!(out, "{}", row.join(","));
    }
    out
}

pub fn emit_json(grid: &SweepGrid) -> String {
    let axis = |a: &super::config::Axis| {
        json!({ "param": a.param, "min": a.min, "max": a.max, "count": a.count, "values": a.values() })
    };
    let cells: Vec<Value> = grid
        .cells
        .iter()
        .map(|cell| {
            let values: Map<String, Value> =
                grid.columns.iter().zip(&cell.values).map(|(c, &v)| (c.clone(), number(v))).collect();
            json!({
                "axis1": cell.axis1,
                "axis2": cell.axis2,
                "values": values,
                "residual": number(cell.residual),
                "truncation_delta": cell.truncation_delta.map_or(Value::Null, number),
                "error": cell.error,
            })
        })
        .collect();
    let doc = json!({
        "schema_version": SCHEMA_VERSION,
        "axis1": axis(&grid.axis1),
        "axis2": axis(&grid.axis2),
        "columns": grid.columns,
        "cells": cells,
    });
    let mut text = serde_json::to_string_pretty(&doc).expect("grid serializes");
    text.push('\n');
    text
}

pub fn emit(grid: &SweepGrid, format: OutputFormat) -> Vec<u8> {
    match format {
        OutputFormat::Csv => emit_csv(grid),
        OutputFormat::Json => emit_json(grid),
    }
    .into_bytes()
}
