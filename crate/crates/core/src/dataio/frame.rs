use std::io::Write;

use serde::{Deserialize, Serialize};

use super::schema::{ColumnKind, ColumnSchema};
use crate::error::{Error, Result};
use crate::matrix::Matrix;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ColumnData {
    Numeric(Vec<f64>),
    Text(Vec<String>),
}

impl ColumnData {
    fn len(&self) -> usize {
        match self {
            ColumnData::Numeric(v) => v.len(),
            ColumnData::Text(v) => v.len(),
        }
    }
}

/// Named-column table with a row mask. Rows are masked, never reordered.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    schema: Vec<ColumnSchema>,
    columns: Vec<ColumnData>,
    n_rows: usize,
    active: Vec<bool>,
}

/// Feature matrix and target over the active rows of a frame.
#[derive(Debug, Clone)]
pub struct Design {
    pub x: Matrix,
    pub y: Vec<f64>,
    pub feature_names: Vec<String>,
    /// Frame row id of each design row.
    pub row_ids: Vec<usize>,
}

impl Frame {
    pub fn new(schema: Vec<ColumnSchema>, columns: Vec<ColumnData>) -> Result<Self> {
        if schema.len() != columns.len() {
            return Err(Error::invalid("schema and column counts differ"));
        }
        let n_rows = columns.first().map_or(0, ColumnData::len);
        if columns.iter().any(|c| c.len() != n_rows) {
            return Err(Error::invalid("columns differ in length"));
        }
        for (i, c) in schema.iter().enumerate() {
            if schema[..i].iter().any(|o| o.name == c.name) {
                return Err(Error::invalid(format!("duplicate column {:?}", c.name)));
            }
        }
        for kind in [ColumnKind::Target, ColumnKind::Timestamp] {
            let count = schema.iter().filter(|c| c.kind == kind).count();
            if count != 1 {
                return Err(Error::invalid(format!(
                    "expected exactly one {kind:?} column, found {count}"
                )));
            }
        }
        for (c, data) in schema.iter().zip(&columns) {
            match (c.kind, data) {
                (ColumnKind::Timestamp, ColumnData::Text(_)) => {}
                (ColumnKind::Timestamp, _) => {
                    return Err(Error::invalid("timestamp column must hold text"))
                }
                (_, ColumnData::Numeric(v)) => {
                    if let Some(i) = v.iter().position(|x| !x.is_finite()) {
                        return Err(Error::Parse {
                            row: i + 2,
                            column: c.name.clone(),
                            value: v[i].to_string(),
                        });
                    }
                }
                (_, ColumnData::Text(_)) => {
                    return Err(Error::invalid(format!("column {:?} must be numeric", c.name)))
                }
            }
        }
        Ok(Self {
            schema,
            columns,
            n_rows,
            active: vec![true; n_rows],
        })
    }

    pub fn schema(&self) -> &[ColumnSchema] {
        &self.schema
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_active(&self) -> usize {
        self.active.iter().filter(|&&a| a).count()
    }

    pub fn active_mask(&self) -> &[bool] {
        &self.active
    }

    pub fn active_rows(&self) -> Vec<usize> {
        (0..self.n_rows).filter(|&i| self.active[i]).collect()
    }

    pub fn column_index(&self, name: &str) -> Result<usize> {
        self.schema
            .iter()
            .position(|c| c.name == name)
            .ok_or_else(|| Error::UnknownColumn(name.to_string()))
    }

    pub fn column(&self, name: &str) -> Result<&ColumnData> {
        Ok(&self.columns[self.column_index(name)?])
    }

    /// Full numeric column including masked rows.
    pub fn numeric(&self, name: &str) -> Result<&[f64]> {
        match self.column(name)? {
            ColumnData::Numeric(v) => Ok(v),
            ColumnData::Text(_) => Err(Error::invalid(format!("column {name:?} is not numeric"))),
        }
    }

    /// Numeric column restricted to active rows.
    pub fn active_values(&self, name: &str) -> Result<Vec<f64>> {
        let v = self.numeric(name)?;
        Ok(v.iter()
            .zip(&self.active)
            .filter(|(_, &a)| a)
            .map(|(&x, _)| x)
            .collect())
    }

    pub fn timestamps(&self) -> &[String] {
        let idx = self
            .schema
            .iter()
            .position(|c| c.kind == ColumnKind::Timestamp)
            .expect("frame invariant: one timestamp column");
        match &self.columns[idx] {
            ColumnData::Text(v) => v,
            ColumnData::Numeric(_) => unreachable!("timestamp column holds text"),
        }
    }

    pub fn target_name(&self) -> &str {
        &self
            .schema
            .iter()
            .find(|c| c.kind == ColumnKind::Target)
            .expect("frame invariant: one target column")
            .name
    }

    /// Feature column names in schema order; random-control columns are
    /// included only when asked.
    pub fn feature_names(&self, include_random: bool) -> Vec<String> {
        self.schema
            .iter()
            .filter(|c| match c.kind {
                ColumnKind::Feature => true,
                ColumnKind::RandomControl => include_random,
                _ => false,
            })
            .map(|c| c.name.clone())
            .collect()
    }

    /// Returns a frame whose mask is the conjunction of the current mask and
    /// `keep`.
    pub fn with_mask(&self, keep: &[bool]) -> Result<Frame> {
        if keep.len() != self.n_rows {
            return Err(Error::invalid("mask length differs from row count"));
        }
        let mut out = self.clone();
        for (a, &k) in out.active.iter_mut().zip(keep) {
            *a = *a && k;
        }
        Ok(out)
    }

    /// Appends a numeric column, or replaces one of the same name.
    pub fn with_column(&self, schema: ColumnSchema, values: Vec<f64>) -> Result<Frame> {
        if values.len() != self.n_rows {
            return Err(Error::invalid("new column length differs from row count"));
        }
        if matches!(schema.kind, ColumnKind::Target | ColumnKind::Timestamp) {
            return Err(Error::invalid("only feature columns may be added"));
        }
        let mut out = self.clone();
        match out.schema.iter().position(|c| c.name == schema.name) {
            Some(i) => {
                out.schema[i] = schema;
                out.columns[i] = ColumnData::Numeric(values);
            }
            None => {
                out.schema.push(schema);
                out.columns.push(ColumnData::Numeric(values));
            }
        }
        Ok(out)
    }

    /// Feature matrix over active rows using the named columns.
    pub fn matrix(&self, columns: &[String]) -> Result<Matrix> {
        let rows = self.active_rows();
        let cols = columns
            .iter()
            .map(|c| self.numeric(c))
            .collect::<Result<Vec<_>>>()?;
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for &r in &rows {
            data.extend(cols.iter().map(|c| c[r]));
        }
        Matrix::new(rows.len(), cols.len(), data)
    }

    pub fn design(&self, include_random: bool) -> Result<Design> {
        let feature_names = self.feature_names(include_random);
        let x = self.matrix(&feature_names)?;
        let y = self.active_values(self.target_name())?;
        Ok(Design {
            x,
            y,
            feature_names,
            row_ids: self.active_rows(),
        })
    }

    /// Writes the active rows as CSV with the schema order as header.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(self.schema.iter().map(|c| c.name.as_str()))?;
        let mut record = Vec::with_capacity(self.schema.len());
        for r in self.active_rows() {
            record.clear();
            for c in &self.columns {
                record.push(match c {
                    ColumnData::Numeric(v) => v[r].to_string(),
                    ColumnData::Text(v) => v[r].clone(),
                });
            }
            w.write_record(&record)?;
        }
        w.flush().map_err(|e| Error::io("<csv writer>", e))?;
        Ok(())
    }
}
