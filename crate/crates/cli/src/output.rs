//! Row-oriented output in CSV, JSON or an aligned text table.
//!
//! CSV numbers carry 17 significant digits so rows round-trip exactly;
//! comment lines starting with `#` precede the header.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde_json::{Map, Value};

use crate::args::Format;
use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Bool(bool),
    Text(String),
    Missing,
}

impl Cell {
    pub fn csv(&self) -> String {
        match self {
            Cell::Num(v) if v.is_finite() => format!("{v:.16e}"),
            Cell::Num(v) => v.to_string(),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Missing => String::new(),
        }
    }

    pub fn human(&self) -> String {
        match self {
            Cell::Num(v) if *v != 0.0 && (v.abs() < 1e-4 || v.abs() >= 1e6) => format!("{v:.6e}"),
            Cell::Num(v) if v.is_finite() => format!("{v:.9}"),
            Cell::Missing => "-".into(),
            other => other.csv(),
        }
    }

    pub fn json(&self) -> Value {
        match self {
            Cell::Num(v) => serde_json::Number::from_f64(*v).map(Value::Number).unwrap_or(Value::Null),
            Cell::Int(v) => Value::from(*v),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Missing => Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map(Into::into).unwrap_or(Cell::Missing)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub comments: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Table { comments: Vec::new(), columns: columns.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write_csv(&self, w: &mut dyn Write) -> Result<(), CliError> {
        for c in &self.comments {
            writeln!(w, "# {c}")?;
        }
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.columns)?;
        for row in &self.rows {
            out.write_record(row.iter().map(Cell::csv))?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> =
                        self.columns.iter().cloned().zip(row.iter().map(Cell::json)).collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }

    /// Aligned columns; a single row is printed as `name  value` lines.
    pub fn write_text(&self, w: &mut dyn Write) -> Result<(), CliError> {
        for c in &self.comments {
            writeln!(w, "# {c}")?;
        }
        if self.rows.len() == 1 {
            let width = self.columns.iter().map(|c| c.chars().count()).max().unwrap_or(0);
            for (name, cell) in self.columns.iter().zip(&self.rows[0]) {
                writeln!(w, "{name:<width$}  {}", cell.human())?;
            }
            return Ok(());
        }
        let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(Cell::human).collect()).collect();
        let widths: Vec<usize> = self
            .columns
            .iter()
            .enumerate()
            .map(|(i, c)| cells.iter().map(|r| r[i].chars().count()).chain([c.chars().count()]).max().unwrap_or(0))
            .collect();
        let line = |w: &mut dyn Write, items: &mut dyn Iterator<Item = &str>| -> io::Result<()> {
            let parts: Vec<String> = items.zip(&widths).map(|(s, n)| format!("{s:>n$}")).collect();
            writeln!(w, "{}", parts.join("  ").trim_end())
        };
        line(w, &mut self.columns.iter().map(String::as_str))?;
        for r in &cells {
            line(w, &mut r.iter().map(String::as_str))?;
        }
        Ok(())
    }

    pub fn write(&self, format: Format, w: &mut dyn Write) -> Result<(), CliError> {
        match format {
            Format::Csv => self.write_csv(w),
            Format::Table => self.write_text(w),
            Format::Json => write_json(&self.to_json(), w),
        }
    }
}

pub fn write_json(v: &Value, w: &mut dyn Write) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *w, v).map_err(io::Error::from)?;
    writeln!(w)?;
    Ok(())
}

/// Runs `f` against the file at `path`, or stdout.
pub fn emit(path: Option<&Path>, f: impl FnOnce(&mut dyn Write) -> Result<(), CliError>) -> Result<(), CliError> {
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            f(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            f(&mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}
