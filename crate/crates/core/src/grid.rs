//! Labeled result containers and their CSV / JSON encodings.
//!
//! CSV layout: `# key=value` metadata lines, a column header, then numeric
//! rows written with 17 significant digits.

use std::collections::BTreeMap;
use std::fmt::{Display, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Formats a float with 17 significant digits, independent of locale.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub name: String,
    pub values: Vec<f64>,
}

impl Axis {
    pub fn new(name: &str, values: Vec<f64>) -> Self {
        Axis {
            name: name.to_string(),
            values,
        }
    }
}

/// Rectangular real array over a row axis and an optional column axis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridResult {
    pub row_axis: Axis,
    /// Second label carried along each row (e.g. t beside τ).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub row_aux: Option<Axis>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub col_axis: Option<Axis>,
    pub value_name: String,
    /// values[i][j]; one entry per row when there is no column axis.
    pub values: Vec<Vec<f64>>,
    pub metadata: BTreeMap<String, String>,
}

impl GridResult {
    pub fn new_1d(row_axis: Axis, value_name: &str, values: Vec<f64>) -> Result<Self> {
        if values.len() != row_axis.values.len() {
            return Err(Error::domain("value count does not match the row axis"));
        }
        Ok(GridResult {
            row_axis,
            row_aux: None,
            col_axis: None,
            value_name: value_name.to_string(),
            values: values.into_iter().map(|v| vec![v]).collect(),
            metadata: BTreeMap::new(),
        })
    }

    pub fn new_2d(row_axis: Axis, col_axis: Axis, value_name: &str, values: Vec<Vec<f64>>) -> Result<Self> {
        if values.len() != row_axis.values.len() || values.iter().any(|r| r.len() != col_axis.values.len()) {
            return Err(Error::domain("grid shape does not match its axes"));
        }
        Ok(GridResult {
            row_axis,
            row_aux: None,
            col_axis: Some(col_axis),
            value_name: value_name.to_string(),
            values,
            metadata: BTreeMap::new(),
        })
    }

    pub fn with_row_aux(mut self, aux: Axis) -> Result<Self> {
        if aux.values.len() != self.row_axis.values.len() {
            return Err(Error::domain("auxiliary row axis has the wrong length"));
        }
        self.row_aux = Some(aux);
        Ok(self)
    }

    pub fn meta(&mut self, key: &str, value: impl Display) {
        self.metadata.insert(key.to_string(), value.to_string());
    }

    /// Values of a 1D result.
    pub fn column(&self) -> Vec<f64> {
        self.values.iter().map(|r| r[0]).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = meta_lines(&self.metadata);
        let mut header = vec![self.row_axis.name.clone()];
        if let Some(aux) = &self.row_aux {
            header.push(aux.name.clone());
        }
        if let Some(col) = &self.col_axis {
            header.push(col.name.clone());
        }
        header.push(self.value_name.clone());
        out.push_str(&header.join(","));
        out.push('\n');
        for (i, row) in self.values.iter().enumerate() {
            let mut lead = vec![fmt_num(self.row_axis.values[i])];
            if let Some(aux) = &self.row_aux {
                lead.push(fmt_num(aux.values[i]));
            }
            match &self.col_axis {
                None => {
                    let _ = writeln!(out, "{},{}", lead.join(","), fmt_num(row[0]));
                }
                Some(col) => {
                    for (j, v) in row.iter().enumerate() {
                        let _ = writeln!(out, "{},{},{}", lead.join(","), fmt_num(col.values[j]), fmt_num(*v));
                    }
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("grid serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::domain(format!("bad grid JSON: {e}")))
    }
}

fn meta_lines(meta: &BTreeMap<String, String>) -> String {
    let mut out = String::new();
    for (k, v) in meta {
        let _ = writeln!(out, "# {k}={v}");
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Int(i64),
    Num(f64),
    Bool(bool),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Num(x) => fmt_num(*x),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) if s.contains(',') || s.contains('"') => format!("\"{}\"", s.replace('"', "\"\"")),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<u32> for Cell {
    fn from(x: u32) -> Self {
        Cell::Int(i64::from(x))
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Bool(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_string())
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Text(x)
    }
}

/// Heterogeneous record table for the reporting subcommands.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub metadata: BTreeMap<String, String>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            ..Table::default()
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn meta(&mut self, key: &str, value: impl Display) {
        self.metadata.insert(key.to_string(), value.to_string());
    }

    pub fn to_csv(&self) -> String {
        let mut out = meta_lines(&self.metadata);
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.iter().map(Cell::csv).collect::<Vec<_>>().join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serialization cannot fail")
    }
}
