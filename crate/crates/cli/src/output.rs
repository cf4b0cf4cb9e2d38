//! Table assembly and the CSV/JSON writers.
//!
//! CSV output: `#`-prefixed metadata lines (tool version, command echo,
//! units), one header row of column names, then data rows. UTF-8, LF line
//! endings, RFC-4180 field syntax (the emitted fields never need quoting).
//! JSON mirrors the same records as an object with a `rows` array.

use std::io::Write;

use serde::Serialize;

#[derive(Debug, Clone, Copy)]
pub enum Cell {
    U64(u64),
    F64(f64),
    Bool(bool),
    /// An inapplicable value; empty field in CSV, null in JSON.
    Missing,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::U64(v) => v.to_string(),
            Cell::F64(v) if v.is_nan() => String::new(),
            Cell::F64(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
            Cell::Missing => String::new(),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Cell::U64(v) => serde_json::Value::from(*v),
            Cell::F64(v) if v.is_nan() => serde_json::Value::Null,
            Cell::F64(v) => serde_json::Value::from(*v),
            Cell::Bool(v) => serde_json::Value::from(*v),
            Cell::Missing => serde_json::Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::F64(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::U64(v)
    }
}

pub struct Table {
    /// Echo of the resolved command line.
    pub command: String,
    /// One line describing the units of the columns.
    pub units: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

pub fn write_csv(table: &Table, out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "# homodyne-qkd {}", env!("CARGO_PKG_VERSION"))?;
    writeln!(out, "# command: {}", table.command)?;
    writeln!(out, "# units: {}", table.units)?;
    writeln!(out, "{}", table.columns.join(","))?;
    for row in &table.rows {
        let fields: Vec<String> = row.iter().map(Cell::csv).collect();
        writeln!(out, "{}", fields.join(","))?;
    }
    Ok(())
}

#[derive(Serialize)]
struct JsonDoc<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    units: &'static str,
    columns: &'a [&'static str],
    rows: Vec<Vec<serde_json::Value>>,
}

pub fn write_json(table: &Table, out: &mut dyn Write) -> std::io::Result<()> {
    let doc = JsonDoc {
        tool: "homodyne-qkd",
        version: env!("CARGO_PKG_VERSION"),
        command: &table.command,
        units: table.units,
        columns: &table.columns,
        rows: table
            .rows
            .iter()
            .map(|row| row.iter().map(Cell::json).collect())
            .collect(),
    };
    serde_json::to_writer_pretty(&mut *out, &doc)?;
    writeln!(out)?;
    Ok(())
}
