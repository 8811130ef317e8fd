use std::fs::File;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::frame::{ColumnData, Frame};
use super::schema::{standard_column, ColumnKind, STANDARD_HEADER, TARGET_COLUMN, TIMESTAMP_COLUMN};
use crate::error::{Error, Result};

/// How strictly the header is checked against the standard sensor file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchemaMode {
    /// Exactly the standard columns, in any order.
    #[default]
    Strict,
    /// Any columns, as long as `date` and `Appliances` are present.
    Infer,
}

pub fn load_csv(path: impl AsRef<Path>, mode: SchemaMode) -> Result<Frame> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_csv(file, mode)
}

/// Parses a sensor table from any reader. Row numbers in errors are 1-based
/// file lines, so the first data row is row 2.
pub fn read_csv<R: Read>(input: R, mode: SchemaMode) -> Result<Frame> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(input);
    let mut records = reader.records();
    let header = match records.next() {
        Some(h) => h?,
        None => return Err(Error::Empty("file has no header line".into())),
    };
    let names: Vec<String> = header.iter().map(str::to_string).collect();
    if names.iter().all(String::is_empty) {
        return Err(Error::Empty("header line is blank".into()));
    }
    check_header(&names, mode)?;

    let schema: Vec<_> = names.iter().map(|n| standard_column(n)).collect();
    let mut numeric: Vec<Vec<f64>> = vec![Vec::new(); names.len()];
    let mut text: Vec<String> = Vec::new();
    let ts_idx = schema
        .iter()
        .position(|c| c.kind == ColumnKind::Timestamp)
        .expect("checked header");

    for (i, rec) in records.enumerate() {
        let rec = rec?;
        let row = i + 2;
        if rec.len() != names.len() {
            return Err(Error::Parse {
                row,
                column: format!("<{} fields>", rec.len()),
                value: rec.iter().collect::<Vec<_>>().join(","),
            });
        }
        for (j, cell) in rec.iter().enumerate() {
            if j == ts_idx {
                text.push(cell.to_string());
                continue;
            }
            let v: f64 = cell.parse().map_err(|_| Error::Parse {
                row,
                column: names[j].clone(),
                value: cell.to_string(),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    row,
                    column: names[j].clone(),
                    value: cell.to_string(),
                });
            }
            numeric[j].push(v);
        }
    }
    if text.is_empty() {
        return Err(Error::Empty("file has no data rows".into()));
    }

    let columns = numeric
        .into_iter()
        .enumerate()
        .map(|(j, v)| {
            if j == ts_idx {
                ColumnData::Text(std::mem::take(&mut text))
            } else {
                ColumnData::Numeric(v)
            }
        })
        .collect();
    Frame::new(schema, columns)
}

fn check_header(names: &[String], mode: SchemaMode) -> Result<()> {
    for (i, n) in names.iter().enumerate() {
        if names[..i].contains(n) {
            return Err(Error::invalid(format!("duplicate column {n:?}")));
        }
    }
    match mode {
        SchemaMode::Strict => {
            for expected in STANDARD_HEADER {
                if !names.iter().any(|n| n == expected) {
                    return Err(Error::MissingColumn(expected.to_string()));
                }
            }
            if let Some(extra) = names.iter().find(|n| !STANDARD_HEADER.contains(&n.as_str())) {
                return Err(Error::UnexpectedColumn(extra.clone()));
            }
        }
        SchemaMode::Infer => {
            for required in [TIMESTAMP_COLUMN, TARGET_COLUMN] {
                if !names.iter().any(|n| n == required) {
                    return Err(Error::MissingColumn(required.to_string()));
                }
            }
        }
    }
    Ok(())
}
