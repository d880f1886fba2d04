//! CSV and JSON persistence of [`Table`]s.
//!
//! Both writers are deterministic: numbers are printed with 17
//! significant digits in CSV and in shortest round-trip form in JSON, and
//! column and metadata order are preserved.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde_json::{Map, Value};

use crate::table::{Cell, Table};
use crate::LabError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Some(Format::Csv),
            "json" => Some(Format::Json),
            _ => None,
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// `{:.16e}` gives 17 significant digits, enough to round-trip any f64.
pub fn format_number(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "NaN".to_owned()
    } else if v > 0.0 {
        "inf".to_owned()
    } else {
        "-inf".to_owned()
    }
}

pub fn write_csv<W: Write>(table: &Table, out: W) -> Result<(), LabError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(&table.names)?;
    for i in 0..table.len() {
        let record: Vec<String> = table
            .row(i)
            .into_iter()
            .map(|c| match c {
                Cell::Num(v) => format_number(*v),
                Cell::Text(s) => s.clone(),
                Cell::Null => String::new(),
            })
            .collect();
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

fn cell_to_json(c: &Cell) -> Value {
    match c {
        Cell::Num(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
        Cell::Text(s) => Value::String(s.clone()),
        Cell::Null => Value::Null,
    }
}

pub fn to_json(table: &Table) -> Value {
    let mut columns = Map::new();
    for (name, col) in table.names.iter().zip(&table.columns) {
        columns.insert(
            name.clone(),
            Value::Array(col.iter().map(cell_to_json).collect()),
        );
    }
    let mut root = Map::new();
    root.insert("metadata".into(), Value::Object(table.metadata.clone()));
    root.insert("columns".into(), Value::Object(columns));
    Value::Object(root)
}

pub fn write_json<W: Write>(table: &Table, mut out: W) -> Result<(), LabError> {
    serde_json::to_writer_pretty(&mut out, &to_json(table))?;
    out.write_all(b"\n")?;
    Ok(())
}

/// Reads back a table written by [`write_json`].
pub fn read_json(text: &str) -> Result<Table, LabError> {
    let root: Value = serde_json::from_str(text)?;
    let bad = |m: &str| LabError::Format(m.to_owned());
    let obj = root
        .as_object()
        .ok_or_else(|| bad("top level is not an object"))?;
    let metadata = match obj.get("metadata") {
        Some(Value::Object(m)) => m.clone(),
        _ => return Err(bad("missing metadata object")),
    };
    let columns = obj
        .get("columns")
        .and_then(Value::as_object)
        .ok_or_else(|| bad("missing columns object"))?;
    let mut table = Table::new(columns.keys().cloned());
    table.metadata = metadata;
    for (i, values) in columns.values().enumerate() {
        let values = values
            .as_array()
            .ok_or_else(|| bad("column is not an array"))?;
        table.columns[i] = values
            .iter()
            .map(|v| match v {
                Value::Null => Ok(Cell::Null),
                Value::Number(n) => n.as_f64().map(Cell::Num).ok_or_else(|| bad("bad number")),
                Value::String(s) => Ok(Cell::Text(s.clone())),
                _ => Err(bad("unsupported cell value")),
            })
            .collect::<Result<_, _>>()?;
    }
    if table.columns.iter().any(|c| c.len() != table.len()) {
        return Err(bad("columns differ in length"));
    }
    Ok(table)
}

/// Sidecar holding the metadata of a CSV file: `PATH.meta.json`.
pub fn metadata_path(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

/// Writes `table` to `path`, or to standard output when `path` is `None`.
/// CSV files get a metadata sidecar.
pub fn write_output(table: &Table, format: Format, path: Option<&Path>) -> Result<(), LabError> {
    let mut buf = Vec::new();
    match format {
        Format::Csv => write_csv(table, &mut buf)?,
        Format::Json => write_json(table, &mut buf)?,
    }
    match path {
        None => io::stdout().lock().write_all(&buf)?,
        Some(p) => {
            fs::write(p, &buf).map_err(|e| LabError::Io(format!("{}: {e}", p.display())))?;
            if format == Format::Csv && !table.metadata.is_empty() {
                let mut meta = serde_json::to_vec_pretty(&Value::Object(table.metadata.clone()))?;
                meta.push(b'\n');
                let mp = metadata_path(p);
                fs::write(&mp, meta).map_err(|e| LabError::Io(format!("{}: {e}", mp.display())))?;
            }
        }
    }
    Ok(())
}
