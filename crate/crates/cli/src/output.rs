//! Deterministic CSV and JSON rendering of sweep tables.
//!
//! CSV carries a `#`-prefixed metadata block, then a header row and one
//! record per sweep entry, `.` decimal point, no locale anywhere. JSON
//! carries the same metadata plus typed rows keyed by column name. Neither
//! embeds timestamps, so identical runs produce identical bytes.

use serde_json::{json, Map, Value};
use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(u64),
    Text(&'static str),
    Bool(bool),
    /// Column not applicable for this row.
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Float(v) => format!("{v}"),
            Cell::Int(v) => format!("{v}"),
            Cell::Text(v) => (*v).to_string(),
            Cell::Bool(v) => format!("{v}"),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Float(v) => json!(v),
            Cell::Int(v) => json!(v),
            Cell::Text(v) => json!(v),
            Cell::Bool(v) => json!(v),
            Cell::Empty => Value::Null,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    /// Key-value metadata: scenario hash, tool version, command, seed, ...
    pub metadata: Vec<(&'static str, String)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self {
            metadata: Vec::new(),
            columns,
            rows: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: &'static str, value: impl ToString) {
        self.metadata.push((key, value.to_string()));
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

pub fn render_csv(table: &Table) -> String {
    let mut out = String::new();
    for (key, value) in &table.metadata {
        writeln!(out, "# {key}={value}").unwrap();
    }
    writeln!(out, "{}", table.columns.join(",")).unwrap();
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(Cell::csv).collect();
        writeln!(out, "{}", cells.join(",")).unwrap();
    }
    out
}

pub fn render_json(table: &Table) -> String {
    let mut metadata = Map::new();
    for (key, value) in &table.metadata {
        metadata.insert((*key).to_string(), json!(value));
    }
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|row| {
            let mut obj = Map::new();
            for (col, cell) in table.columns.iter().zip(row) {
                obj.insert((*col).to_string(), cell.json());
            }
            Value::Object(obj)
        })
        .collect();
    let doc = json!({ "metadata": Value::Object(metadata), "rows": rows });
    let mut text = serde_json::to_string_pretty(&doc).expect("tables serialize");
    text.push('\n');
    text
}
