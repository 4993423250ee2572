//! Tables and their CSV / JSON renderings.

use std::fmt::Write as _;

use serde::Serialize;

use crate::config::Settings;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Text(String),
    Bool(bool),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Index of a column by name.
    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| *c == name)
    }
}

/// Header row, then one line per row. Floats carry 17 significant digits.
pub fn to_csv(table: &Table) -> String {
    let mut out = table.columns.join(",");
    out.push('\n');
    for row in &table.rows {
        for (i, cell) in row.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            match cell {
                Cell::Float(v) => write!(out, "{v:.16e}"),
                Cell::Int(v) => write!(out, "{v}"),
                Cell::Text(v) => write!(out, "{v}"),
                Cell::Bool(v) => write!(out, "{v}"),
            }
            .expect("writing to a String cannot fail");
        }
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct Record<'a> {
    command: &'a str,
    config: &'a Settings,
    columns: &'a [String],
    rows: &'a [Vec<Cell>],
}

/// `{command, config, columns, rows}`; `config` can be fed back through `--config`.
pub fn to_json(command: &str, settings: &Settings, table: &Table) -> String {
    let rec = Record { command, config: settings, columns: &table.columns, rows: &table.rows };
    let mut s = serde_json::to_string_pretty(&rec).expect("table serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut t = Table::new(&["n", "energy", "check"]);
        t.push(vec![0usize.into(), (-400.64).into(), "ok".into()]);
        let csv = to_csv(&t);
        assert_eq!(csv, "n,energy,check\n0,-4.0063999999999999e2,ok\n");
        let field: f64 = csv.lines().nth(1).unwrap().split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(field, -400.64);
    }

    #[test]
    fn json_record() {
        let mut t = Table::new(&["w"]);
        t.push(vec![0.1.into()]);
        let v: serde_json::Value = serde_json::from_str(&to_json("spectrum", &Settings::default(), &t)).unwrap();
        assert_eq!(v["command"], "spectrum");
        assert_eq!(v["rows"][0][0].as_f64(), Some(0.1));
        assert!(v["config"].is_object());
    }
}
