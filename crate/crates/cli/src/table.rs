//! Tables written as CSV with a metadata comment line, or as JSON.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde_json::{json, Value};

use crate::config::Format;

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(u64),
    Float(f64),
    Text(String),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            // shortest representation that parses back to the same bits
            Cell::Float(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            Cell::Float(v) => json!(v),
            Cell::Text(s) => json!(s),
            Cell::Empty => Value::Null,
        }
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

#[derive(Clone, Debug)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

/// Identifies the producing run in every table.
#[derive(Clone, Debug)]
pub struct Meta {
    pub command: String,
    pub seed: u64,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Writes `{dir}/{stem}.{ext}` and returns the path.
    pub fn write(&self, dir: &Path, stem: &str, format: Format, meta: &Meta) -> Result<PathBuf> {
        let path = dir.join(format!("{stem}.{}", format.extension()));
        let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
        let mut out = BufWriter::new(file);
        self.write_to(&mut out, format, meta)
            .and_then(|_| Ok(out.flush()?))
            .with_context(|| format!("writing {}", path.display()))?;
        Ok(path)
    }

    pub fn write_to(&self, out: &mut impl Write, format: Format, meta: &Meta) -> Result<()> {
        match format {
            Format::Csv => {
                writeln!(
                    out,
                    "# meshprune {} seed={} command={}",
                    meshprune::VERSION,
                    meta.seed,
                    meta.command
                )?;
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.columns)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(Cell::csv))?;
                }
                w.flush()?;
            }
            Format::Json => {
                let doc = json!({
                    "meta": {
                        "tool": "meshprune",
                        "version": meshprune::VERSION,
                        "command": meta.command,
                        "seed": meta.seed,
                    },
                    "columns": self.columns,
                    "rows": self.rows.iter().map(|r| r.iter().map(Cell::json).collect::<Vec<_>>()).collect::<Vec<_>>(),
                });
                serde_json::to_writer(&mut *out, &doc)?;
                writeln!(out)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> (Table, Meta) {
        let mut t = Table::new(&["n", "mode", "value", "note"]);
        t.push(vec![4usize.into(), "prune_body".into(), 0.1f64.into(), Cell::Empty]);
        t.push(vec![
            8usize.into(),
            "noise_tail".into(),
            (1.0f64 / 3.0).into(),
            "x".into(),
        ]);
        (
            t,
            Meta {
                command: "sweep".into(),
                seed: 5,
            },
        )
    }

    #[test]
    fn csv_has_meta_line_and_round_trip_floats() {
        let (t, meta) = sample();
        let mut buf = Vec::new();
        t.write_to(&mut buf, Format::Csv, &meta).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("# meshprune ") && lines[0].contains("seed=5"));
        assert_eq!(lines[1], "n,mode,value,note");
        assert_eq!(lines[2], "4,prune_body,0.1,");
        let third: f64 = lines[3].split(',').nth(2).unwrap().parse().unwrap();
        assert_eq!(third, 1.0 / 3.0);
    }

    #[test]
    fn json_rows_are_typed() {
        let (t, meta) = sample();
        let mut buf = Vec::new();
        t.write_to(&mut buf, Format::Json, &meta).unwrap();
        let v: Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["meta"]["seed"], 5);
        assert_eq!(v["rows"][0][0], 4);
        assert_eq!(v["rows"][0][3], Value::Null);
        assert_eq!(v["columns"][1], "mode");
    }
}
