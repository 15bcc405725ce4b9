use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Serialize;

use crate::args::Format;
use crate::UsageError;

/// Writes `rows` to `<dir>/<stem>.<ext>`: CSV with a header row, or a JSON
/// array of objects with the same keys.
pub fn write_rows<R: Serialize>(dir: &Path, stem: &str, format: Format, rows: &[R]) -> Result<PathBuf> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(format!("{stem}.{}", format.extension()));
    let bytes = match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in rows {
                w.serialize(r)?;
            }
            w.into_inner().map_err(|e| anyhow::anyhow!("{e}"))?
        }
        Format::Json => {
            let mut s = serde_json::to_vec_pretty(rows)?;
            s.push(b'\n');
            s
        }
    };
    fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

/// A report read back from disk: one map from column name to text per row.
#[derive(Debug, Clone)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<BTreeMap<String, String>>,
}

impl Table {
    pub fn has(&self, col: &str) -> bool {
        self.columns.iter().any(|c| c == col)
    }

    pub fn numbers(&self, col: &str) -> Result<Vec<f64>> {
        self.rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let raw = r.get(col).ok_or_else(|| UsageError(format!("row {i}: missing column {col}")))?;
                raw.parse::<f64>()
                    .map_err(|_| UsageError(format!("row {i}: column {col} is not a number: {raw}")).into())
            })
            .collect()
    }
}

pub fn read_table(path: &Path) -> Result<Table> {
    let text = fs::read_to_string(path).map_err(|e| UsageError(format!("cannot read {}: {e}", path.display())))?;
    match path.extension().and_then(|e| e.to_str()) {
        Some("csv") => read_csv(&text),
        Some("json") => read_json(&text),
        _ => bail!(UsageError(format!("{}: expected a .csv or .json report", path.display()))),
    }
}

fn read_csv(text: &str) -> Result<Table> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let columns: Vec<String> = r
        .headers()
        .map_err(|e| UsageError(format!("malformed CSV header: {e}")))?
        .iter()
        .map(str::to_owned)
        .collect();
    let mut rows = vec![];
    for rec in r.records() {
        let rec = rec.map_err(|e| UsageError(format!("malformed CSV: {e}")))?;
        rows.push(columns.iter().cloned().zip(rec.iter().map(str::to_owned)).collect());
    }
    Ok(Table { columns, rows })
}

fn read_json(text: &str) -> Result<Table> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| UsageError(format!("malformed JSON: {e}")))?;
    let items = value
        .as_array()
        .ok_or_else(|| UsageError("JSON report must be an array of objects".into()))?;
    let mut columns: Vec<String> = vec![];
    let mut rows = vec![];
    for item in items {
        let obj = item
            .as_object()
            .ok_or_else(|| UsageError("JSON report must be an array of objects".into()))?;
        let row: BTreeMap<String, String> = obj
            .iter()
            .map(|(k, v)| {
                let s = match v {
                    serde_json::Value::String(s) => s.clone(),
                    other => other.to_string(),
                };
                (k.clone(), s)
            })
            .collect();
        for k in row.keys() {
            if !columns.contains(k) {
                columns.push(k.clone());
            }
        }
        rows.push(row);
    }
    Ok(Table { columns, rows })
}
