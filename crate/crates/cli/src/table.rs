use serde_json::{json, Value};
use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
    /// Column not applicable to this row.
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Num)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

/// A rectangular result with named columns.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Index of a column by name.
    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// CSV with the config echoed on a leading `#` line.
    pub fn to_csv(&self, header: &Value) -> String {
        let mut out = format!("# {header}\n");
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                match cell {
                    // Debug formatting is the shortest round-trip form and
                    // switches to exponent notation for tiny or huge values.
                    Cell::Num(v) => write!(out, "{v:?}").unwrap(),
                    Cell::Text(t) => out.push_str(t),
                    Cell::Empty => {}
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self, header: &Value) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                Value::Array(
                    r.iter()
                        .map(|c| match c {
                            // Non-finite numbers have no JSON form.
                            Cell::Num(v) if v.is_finite() => json!(v),
                            Cell::Num(_) | Cell::Empty => Value::Null,
                            Cell::Text(t) => json!(t),
                        })
                        .collect(),
                )
            })
            .collect();
        let doc = json!({ "config": header, "columns": self.columns, "rows": rows });
        let mut s = serde_json::to_string_pretty(&doc).expect("JSON values always serialize");
        s.push('\n');
        s
    }
}
